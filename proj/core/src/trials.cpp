// core/src/trials.cpp

// Copyright 2026  The gsasv authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsasv/trials.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/rng.hpp"

namespace gsasv {

std::string label_name(TrialLabel label) {
  switch (label) {
    case TrialLabel::kTarget:
      return "target";
    case TrialLabel::kNontarget:
      return "nontarget";
    case TrialLabel::kSpoof:
      return "spoof";
  }
  throw ConfigError("unknown trial label");
}

TrialLabel label_from_name(const std::string& name) {
  if (name == "target") return TrialLabel::kTarget;
  if (name == "nontarget") return TrialLabel::kNontarget;
  if (name == "spoof") return TrialLabel::kSpoof;
  throw FormatError("unknown trial label '" + name +
                    "' (expected target, nontarget or spoof)");
}

namespace {

// Uniform subsample of `trials` down to `cap`, preserving generation order.
void subsample(std::vector<TrialPair>& trials, std::size_t cap, Rng& rng) {
  if (trials.size() <= cap) return;
  std::vector<std::size_t> idx(trials.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  rng.shuffle(idx);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<TrialPair> kept;
  kept.reserve(cap);
  for (std::size_t i : idx) kept.push_back(std::move(trials[i]));
  trials = std::move(kept);
}

}  // namespace

std::vector<TrialPair> generate_trials(const Metadata& meta, const TrialGenConfig& cfg) {
  // Speaker -> sorted bonafide / spoof utterance ids. std::map keeps the
  // speaker iteration order deterministic.
  std::map<std::string, std::vector<std::string>> bonafide;
  std::map<std::string, std::vector<std::string>> spoof;
  for (const UtteranceRecord& r : meta.records) {
    (r.kind == UttKind::kBonafide ? bonafide : spoof)[r.speaker_id].push_back(r.utt_id);
  }
  for (auto& [spk, utts] : bonafide) std::sort(utts.begin(), utts.end());
  for (auto& [spk, utts] : spoof) std::sort(utts.begin(), utts.end());
  if (bonafide.size() < 2) {
    throw ProtocolError("trial generation needs at least 2 speakers with bonafide utterances, got " +
                        std::to_string(bonafide.size()));
  }

  std::vector<TrialPair> targets;
  std::vector<TrialPair> nontargets;
  std::vector<TrialPair> spoofs;

  for (const auto& [spk, utts] : bonafide) {
    for (std::size_t i = 0; i < utts.size(); ++i) {
      for (std::size_t j = i + 1; j < utts.size(); ++j) {
        targets.push_back({utts[i], utts[j], TrialLabel::kTarget});
        if (cfg.ordered) targets.push_back({utts[j], utts[i], TrialLabel::kTarget});
      }
    }
  }

  std::vector<const std::pair<const std::string, std::vector<std::string>>*> speakers;
  for (const auto& entry : bonafide) speakers.push_back(&entry);
  for (std::size_t a = 0; a < speakers.size(); ++a) {
    for (std::size_t b = a + 1; b < speakers.size(); ++b) {
      for (const std::string& u : speakers[a]->second) {
        for (const std::string& v : speakers[b]->second) {
          const bool u_first = u < v;
          if (cfg.ordered) {
            nontargets.push_back({u, v, TrialLabel::kNontarget});
            nontargets.push_back({v, u, TrialLabel::kNontarget});
          } else {
            nontargets.push_back(
                {u_first ? u : v, u_first ? v : u, TrialLabel::kNontarget});
          }
        }
      }
    }
  }

  for (const auto& [spk, utts] : bonafide) {
    auto it = spoof.find(spk);
    if (it == spoof.end()) continue;
    for (const std::string& e : utts) {
      for (const std::string& t : it->second) {
        spoofs.push_back({e, t, TrialLabel::kSpoof});
      }
    }
  }

  if (cfg.mode == PairMode::kSampled) {
    Rng rng_t(derive_seed(cfg.seed, "trial-sample-target"));
    Rng rng_n(derive_seed(cfg.seed, "trial-sample-nontarget"));
    Rng rng_s(derive_seed(cfg.seed, "trial-sample-spoof"));
    subsample(targets, cfg.cap_target, rng_t);
    subsample(nontargets, cfg.cap_nontarget, rng_n);
    subsample(spoofs, cfg.cap_spoof, rng_s);
  }

  std::vector<TrialPair> all;
  all.reserve(targets.size() + nontargets.size() + spoofs.size());
  for (auto& t : targets) all.push_back(std::move(t));
  for (auto& t : nontargets) all.push_back(std::move(t));
  for (auto& t : spoofs) all.push_back(std::move(t));
  return all;
}

TrialCounts count_trials(const std::vector<TrialPair>& trials) {
  TrialCounts c;
  for (const TrialPair& t : trials) {
    switch (t.label) {
      case TrialLabel::kTarget:
        ++c.target;
        break;
      case TrialLabel::kNontarget:
        ++c.nontarget;
        break;
      case TrialLabel::kSpoof:
        ++c.spoof;
        break;
    }
  }
  return c;
}

TrialSplit split_trials(const std::vector<TrialPair>& trials, double eval_fraction,
                        std::uint64_t seed) {
  if (eval_fraction < 0.0 || eval_fraction > 1.0) {
    throw DomainError("eval fraction must lie in [0, 1], got " + std::to_string(eval_fraction));
  }
  TrialSplit out;
  for (int label = 0; label < 3; ++label) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (static_cast<int>(trials[i].label) == label) idx.push_back(i);
    }
    Rng rng(derive_seed(seed, "trial-split-" + std::to_string(label)));
    rng.shuffle(idx);
    const std::size_t n_eval =
        static_cast<std::size_t>(eval_fraction * static_cast<double>(idx.size()) + 0.5);
    std::vector<std::size_t> eval_idx(idx.begin(), idx.begin() + n_eval);
    std::vector<std::size_t> train_idx(idx.begin() + n_eval, idx.end());
    std::sort(eval_idx.begin(), eval_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    for (std::size_t i : eval_idx) out.eval.push_back(trials[i]);
    for (std::size_t i : train_idx) out.train.push_back(trials[i]);
  }
  return out;
}

std::vector<TrialPair> read_trials(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::vector<TrialPair> trials;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find('\t', start);
      if (pos == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (cols.size() != 3) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": expected 3 columns, got " +
                        std::to_string(cols.size()));
    }
    if (cols[0].empty() || cols[1].empty()) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": empty utterance id");
    }
    TrialLabel label;
    try {
      label = label_from_name(cols[2]);
    } catch (const FormatError& e) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    trials.push_back({cols[0], cols[1], label});
  }
  return trials;
}

void write_trials(const std::vector<TrialPair>& trials, const std::string& path) {
  std::ostringstream out;
  for (const TrialPair& t : trials) {
    out << t.enroll_id << '\t' << t.test_id << '\t' << label_name(t.label) << '\n';
  }
  atomic_write_file(path, out.str());
}

}  // namespace gsasv
