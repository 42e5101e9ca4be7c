// core/src/eval.cpp

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

#include "gsasv/eval.hpp"

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"

namespace gsasv {

EvalReport evaluate_scores(const std::vector<TrialPair>& trials,
                           const std::vector<double>& scores, double alpha) {
  if (trials.size() != scores.size()) {
    throw ShapeError("trial list holds " + std::to_string(trials.size()) + " entries but " +
                     std::to_string(scores.size()) + " scores were given");
  }
  std::vector<double> pos;
  std::vector<double> non;
  std::vector<double> spf;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    switch (trials[i].label) {
      case TrialLabel::kTarget: pos.push_back(scores[i]); break;
      case TrialLabel::kNontarget: non.push_back(scores[i]); break;
      case TrialLabel::kSpoof: spf.push_back(scores[i]); break;
    }
  }
  EvalReport r;
  r.alpha = alpha;
  r.counts.n_target = pos.size();
  r.counts.n_nontarget = non.size();
  r.counts.n_spoof = spf.size();
  if (pos.empty()) throw EvalError("no target trials to evaluate");
  if (non.empty() && spf.empty()) throw EvalError("no negative trials to evaluate");

  std::vector<double> joint_neg = non;
  joint_neg.insert(joint_neg.end(), spf.begin(), spf.end());
  const EerResult joint = compute_eer(pos, joint_neg);
  r.joint = EvalEntry{true, joint.eer, joint.threshold};
  if (!non.empty()) {
    const EerResult e = compute_eer(pos, non);
    r.bonafide = EvalEntry{true, e.eer, e.threshold};
  }
  if (!spf.empty()) {
    const EerResult e = compute_eer(pos, spf);
    r.spoof = EvalEntry{true, e.eer, e.threshold};
  }
  return r;
}

namespace {

nlohmann::json entry_json(const EvalEntry& e) {
  nlohmann::json j;
  j["defined"] = e.defined;
  if (e.defined) {
    j["eer"] = e.eer;
    j["threshold"] = e.threshold;
  } else {
    j["eer"] = nullptr;
    j["threshold"] = nullptr;
  }
  return j;
}

}  // namespace

std::string eval_report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha;
  j["joint"] = entry_json(r.joint);
  j["bonafide"] = entry_json(r.bonafide);
  j["spoof"] = entry_json(r.spoof);
  j["counts"] = {{"n_target", r.counts.n_target},
                 {"n_nontarget", r.counts.n_nontarget},
                 {"n_spoof", r.counts.n_spoof}};
  return j.dump(2) + "\n";
}

std::string scores_to_tsv(const std::vector<TrialPair>& trials,
                          const std::vector<double>& scores) {
  if (trials.size() != scores.size()) {
    throw ShapeError("trial list holds " + std::to_string(trials.size()) + " entries but " +
                     std::to_string(scores.size()) + " scores were given");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    out << trials[i].enroll_id << '\t' << trials[i].test_id << '\t'
        << label_name(trials[i].label) << '\t' << format_fixed6(scores[i]) << '\n';
  }
  return out.str();
}

void write_scores(const std::vector<TrialPair>& trials, const std::vector<double>& scores,
                  const std::string& path) {
  atomic_write_file(path, scores_to_tsv(trials, scores));
}

std::vector<ScoredTrial> read_scores(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::vector<ScoredTrial> out;
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
    if (cols.size() != 4) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": expected 4 columns, got " +
                        std::to_string(cols.size()));
    }
    ScoredTrial st;
    st.trial.enroll_id = cols[0];
    st.trial.test_id = cols[1];
    try {
      st.trial.label = label_from_name(cols[2]);
    } catch (const FormatError& e) {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    char* end = nullptr;
    st.score = std::strtod(cols[3].c_str(), &end);
    if (end == cols[3].c_str() || *end != '\0') {
      throw FormatError(path + ": line " + std::to_string(line_no) + ": bad score '" + cols[3] +
                        "'");
    }
    out.push_back(st);
  }
  return out;
}

std::vector<DetPoint> joint_det(const std::vector<TrialPair>& trials,
                                const std::vector<double>& scores) {
  if (trials.size() != scores.size()) {
    throw ShapeError("trial list holds " + std::to_string(trials.size()) + " entries but " +
                     std::to_string(scores.size()) + " scores were given");
  }
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].label == TrialLabel::kTarget) {
      pos.push_back(scores[i]);
    } else {
      neg.push_back(scores[i]);
    }
  }
  return det_points(pos, neg);
}

std::string det_to_tsv(const std::vector<DetPoint>& points) {
  std::ostringstream out;
  out << "#threshold\tfar\tfrr\n";
  for (const DetPoint& p : points) {
    out << format_fixed6(p.threshold) << '\t' << format_fixed6(p.far) << '\t'
        << format_fixed6(p.frr) << '\n';
  }
  return out.str();
}

}  // namespace gsasv
