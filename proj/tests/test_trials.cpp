// tests/test_trials.cpp

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

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/trials.hpp"
#include "selfcheck.hpp"
#include "test_util.hpp"

using namespace gsasv;
using gsasv_test::TempDir;

namespace {

Metadata make_meta(std::size_t speakers, std::size_t utts, std::size_t spoofs_per_speaker) {
  Metadata meta;
  meta.vocabs["attack"] = {"a1"};
  meta.vocabs["vocoder"] = {"v1"};
  meta.vocabs["synthesizer"] = {"s1"};
  meta.vocabs["wavegen"] = {"w1"};
  for (std::size_t s = 0; s < speakers; ++s) {
    const std::string spk = "spk" + std::to_string(s);
    for (std::size_t u = 0; u < utts; ++u) {
      UtteranceRecord r;
      r.utt_id = spk + "-b" + std::to_string(u);
      r.speaker_id = spk;
      r.kind = UttKind::kBonafide;
      meta.records.push_back(r);
    }
    for (std::size_t k = 0; k < spoofs_per_speaker; ++k) {
      UtteranceRecord r;
      r.utt_id = spk + "-s" + std::to_string(k);
      r.speaker_id = spk;
      r.kind = UttKind::kSpoof;
      r.attack = "a1";
      r.vocoder = "v1";
      r.synthesizer = "s1";
      r.wavegen = "w1";
      meta.records.push_back(r);
    }
  }
  meta.rebuild_index();
  return meta;
}

std::vector<TrialPair> sorted_copy(std::vector<TrialPair> trials) {
  std::sort(trials.begin(), trials.end(), [](const TrialPair& x, const TrialPair& y) {
    if (x.label != y.label) return static_cast<int>(x.label) < static_cast<int>(y.label);
    if (x.enroll_id != y.enroll_id) return x.enroll_id < y.enroll_id;
    return x.test_id < y.test_id;
  });
  return trials;
}

}  // namespace

TEST_SUITE("trials") {
  TEST_CASE("full enumeration matches the closed forms") {
    for (std::size_t speakers : {2, 3, 5}) {
      for (std::size_t utts : {2, 4}) {
        const std::size_t spoofs = 3;
        const Metadata meta = make_meta(speakers, utts, spoofs);
        const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
        const TrialCounts c = count_trials(trials);
        const std::size_t n = speakers * utts;
        CHECK(c.target == speakers * utts * (utts - 1) / 2);
        CHECK(c.nontarget == n * (n - 1) / 2 - speakers * utts * (utts - 1) / 2);
        CHECK(c.spoof == speakers * utts * spoofs);
      }
    }
  }

  TEST_CASE("full enumeration matches the quadratic reference") {
    const Metadata meta = make_meta(4, 3, 2);
    for (bool ordered : {false, true}) {
      TrialGenConfig cfg;
      cfg.ordered = ordered;
      const std::vector<TrialPair> fast = sorted_copy(generate_trials(meta, cfg));
      const std::vector<TrialPair> ref = selfcheck::enumerate_trials_bruteforce(meta, ordered);
      CHECK(fast == ref);
    }
  }

  TEST_CASE("ordered pairing doubles the bonafide classes only") {
    const Metadata meta = make_meta(3, 3, 2);
    const TrialCounts base = count_trials(generate_trials(meta, TrialGenConfig{}));
    TrialGenConfig ordered;
    ordered.ordered = true;
    const TrialCounts twice = count_trials(generate_trials(meta, ordered));
    CHECK(twice.target == 2 * base.target);
    CHECK(twice.nontarget == 2 * base.nontarget);
    CHECK(twice.spoof == base.spoof);
  }

  TEST_CASE("unordered pairs keep the smaller id on the enroll side") {
    const Metadata meta = make_meta(3, 3, 1);
    const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
    for (const TrialPair& t : trials) {
      if (t.label != TrialLabel::kSpoof) CHECK(t.enroll_id < t.test_id);
    }
  }

  TEST_CASE("sampled mode respects the caps") {
    const Metadata meta = make_meta(5, 4, 3);
    TrialGenConfig cfg;
    cfg.mode = PairMode::kSampled;
    cfg.cap_target = 7;
    cfg.cap_nontarget = 11;
    cfg.cap_spoof = 13;
    cfg.seed = 5;
    const TrialCounts c = count_trials(generate_trials(meta, cfg));
    CHECK(c.target == 7);
    CHECK(c.nontarget == 11);
    CHECK(c.spoof == 13);
  }

  TEST_CASE("caps above the class size change nothing") {
    const Metadata meta = make_meta(2, 3, 1);
    TrialGenConfig cfg;
    cfg.mode = PairMode::kSampled;
    cfg.seed = 5;
    const std::vector<TrialPair> sampled = sorted_copy(generate_trials(meta, cfg));
    const std::vector<TrialPair> full = sorted_copy(generate_trials(meta, TrialGenConfig{}));
    CHECK(sampled == full);
  }

  TEST_CASE("sampling is deterministic in the seed") {
    const Metadata meta = make_meta(5, 4, 3);
    TrialGenConfig cfg;
    cfg.mode = PairMode::kSampled;
    cfg.cap_target = 5;
    cfg.cap_nontarget = 5;
    cfg.cap_spoof = 5;
    cfg.seed = 5;
    const std::vector<TrialPair> a = generate_trials(meta, cfg);
    const std::vector<TrialPair> b = generate_trials(meta, cfg);
    CHECK(a == b);
    cfg.seed = 6;
    const std::vector<TrialPair> c = generate_trials(meta, cfg);
    CHECK(a != c);
  }

  TEST_CASE("a single speaker cannot form a protocol") {
    const Metadata meta = make_meta(1, 4, 2);
    CHECK_THROWS_AS(generate_trials(meta, TrialGenConfig{}), ProtocolError);
  }

  TEST_CASE("split keeps classes proportional and disjoint") {
    const Metadata meta = make_meta(4, 4, 3);
    const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
    const TrialCounts full = count_trials(trials);
    const TrialSplit split = split_trials(trials, 0.25, 77);
    const TrialCounts eval = count_trials(split.eval);
    CHECK(eval.target == static_cast<std::size_t>(0.25 * full.target + 0.5));
    CHECK(eval.nontarget == static_cast<std::size_t>(0.25 * full.nontarget + 0.5));
    CHECK(eval.spoof == static_cast<std::size_t>(0.25 * full.spoof + 0.5));
    CHECK(split.train.size() + split.eval.size() == trials.size());

    std::set<std::pair<std::string, std::string>> seen;
    for (const TrialPair& t : split.train) seen.insert({t.enroll_id, t.test_id});
    for (const TrialPair& t : split.eval) {
      CHECK(seen.find({t.enroll_id, t.test_id}) == seen.end());
    }
    const std::vector<TrialPair> joined = [&] {
      std::vector<TrialPair> v = split.train;
      v.insert(v.end(), split.eval.begin(), split.eval.end());
      return sorted_copy(v);
    }();
    CHECK(joined == sorted_copy(trials));
  }

  TEST_CASE("split is deterministic in the seed") {
    const Metadata meta = make_meta(3, 4, 2);
    const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
    const TrialSplit a = split_trials(trials, 0.2, 9);
    const TrialSplit b = split_trials(trials, 0.2, 9);
    CHECK(a.train == b.train);
    CHECK(a.eval == b.eval);
    const TrialSplit c = split_trials(trials, 0.2, 10);
    CHECK(a.eval != c.eval);
  }

  TEST_CASE("split rejects fractions outside the unit interval") {
    const Metadata meta = make_meta(2, 2, 1);
    const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
    CHECK_THROWS_AS(split_trials(trials, -0.1, 1), DomainError);
    CHECK_THROWS_AS(split_trials(trials, 1.1, 1), DomainError);
  }

  TEST_CASE("trial files round trip") {
    TempDir dir;
    const Metadata meta = make_meta(2, 3, 2);
    const std::vector<TrialPair> trials = generate_trials(meta, TrialGenConfig{});
    const std::string path = dir.file("trials.tsv");
    write_trials(trials, path);
    CHECK(read_trials(path) == trials);
  }

  TEST_CASE("trial file parse errors carry the line number") {
    TempDir dir;
    const std::string path = dir.file("bad.tsv");
    atomic_write_file(path, "e1\tt1\ttarget\ne2\tt2\n");
    try {
      read_trials(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("label names round trip") {
    for (TrialLabel l : {TrialLabel::kTarget, TrialLabel::kNontarget, TrialLabel::kSpoof}) {
      CHECK(label_from_name(label_name(l)) == l);
    }
    CHECK_THROWS_AS(label_from_name("bogus"), FormatError);
  }
}
