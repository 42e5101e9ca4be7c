// tests/test_synth_batching.cpp

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
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsasv/batching.hpp"
#include "gsasv/metadata.hpp"
#include "gsasv/synth.hpp"
#include "gsasv/trials.hpp"

using namespace gsasv;

namespace {

SynthConfig tiny_config() {
  SynthConfig cfg;
  cfg.n_speakers = 3;
  cfg.utts_per_speaker = 4;
  cfg.n_attacks = 2;
  cfg.spoofs_per_speaker_per_attack = 3;
  cfg.asv_dim = 8;
  cfg.cm_dim = 6;
  cfg.n_vocoders = 2;
  cfg.n_synthesizers = 3;
  cfg.n_wavegens = 2;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST_SUITE("synth_batching") {

TEST_CASE("separable preset produces the documented corpus") {
  const SynthOutput out = synth_generate(separable_preset());
  CHECK(out.meta.records.size() == 920);
  CHECK(out.asv.count() == 920);
  CHECK(out.cm.count() == 920);
  CHECK(out.asv.dim() == 256);
  CHECK(out.cm.dim() == 160);
  CHECK(out.meta.vocab(AttrKind::kAttack).size() == 6);
  CHECK(out.meta.vocab(AttrKind::kVocoder).size() == 9);
  CHECK(out.meta.vocab(AttrKind::kSynthesizer).size() == 11);
  CHECK(out.meta.vocab(AttrKind::kWavegen).size() == 9);

  std::size_t bonafide = 0;
  std::size_t spoof = 0;
  for (const UtteranceRecord& rec : out.meta.records) {
    if (rec.kind == UttKind::kBonafide) {
      ++bonafide;
    } else {
      ++spoof;
    }
  }
  CHECK(bonafide == 200);
  CHECK(spoof == 720);
}

TEST_CASE("generation is deterministic in the seed") {
  const SynthConfig cfg = tiny_config();
  const SynthOutput a = synth_generate(cfg);
  const SynthOutput b = synth_generate(cfg);
  REQUIRE(a.asv.count() == b.asv.count());
  for (std::size_t i = 0; i < a.asv.count(); ++i) {
    CHECK(a.asv.ids()[i] == b.asv.ids()[i]);
    for (std::size_t d = 0; d < a.asv.dim(); ++d) {
      CHECK(a.asv.vec_at(i)[d] == b.asv.vec_at(i)[d]);
    }
    for (std::size_t d = 0; d < a.cm.dim(); ++d) {
      CHECK(a.cm.vec_at(i)[d] == b.cm.vec_at(i)[d]);
    }
  }

  SynthConfig other = cfg;
  other.seed = 18;
  const SynthOutput c = synth_generate(other);
  bool any_diff = false;
  for (std::size_t d = 0; d < a.asv.dim(); ++d) {
    if (a.asv.vec_at(0)[d] != c.asv.vec_at(0)[d]) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("every attribute kind is derivable from spoof records") {
  const SynthOutput out = synth_generate(tiny_config());
  for (const UtteranceRecord& rec : out.meta.records) {
    if (rec.kind == UttKind::kBonafide) {
      for (AttrKind k : all_attr_kinds()) CHECK(rec.attr_label(k).empty());
      continue;
    }
    for (AttrKind k : all_attr_kinds()) {
      const std::string& label = rec.attr_label(k);
      REQUIRE_FALSE(label.empty());
      const std::vector<std::string>& vocab = out.meta.vocab(k);
      CHECK(std::find(vocab.begin(), vocab.end(), label) != vocab.end());
    }
  }
}

TEST_CASE("batch count and sizes cover every trial once") {
  SynthConfig scfg = tiny_config();
  scfg.n_speakers = 4;
  scfg.utts_per_speaker = 5;
  const SynthOutput out = synth_generate(scfg);
  TrialGenConfig tcfg;
  std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);
  REQUIRE(trials.size() >= 300);
  trials.resize(300);

  BatchPlanConfig bcfg;
  bcfg.batch_size = 128;
  bcfg.seed = 3;
  const BatchSource source(trials, out.asv, nullptr, nullptr, bcfg);
  CHECK(source.num_trials() == 300);
  CHECK(source.num_batches() == 3);

  const std::vector<std::size_t> order = source.epoch_order(0);
  const std::size_t sizes[] = {128, 128, 44};
  std::size_t total = 0;
  for (std::size_t b = 0; b < source.num_batches(); ++b) {
    const Batch batch = source.make_batch(order, b);
    CHECK(batch.input.rows() == sizes[b]);
    CHECK(batch.input.cols() == 2 * out.asv.dim());
    CHECK(batch.class_targets.rows() == sizes[b]);
    CHECK(batch.class_targets.cols() == 3);
    CHECK(batch.reg_targets.rows() == 0);
    CHECK(batch.attr_targets.rows() == 0);
    total += batch.input.rows();
  }
  CHECK(total == 300);
}

TEST_CASE("epoch order is a permutation keyed by seed and epoch") {
  const SynthOutput out = synth_generate(tiny_config());
  TrialGenConfig tcfg;
  const std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);

  BatchPlanConfig bcfg;
  bcfg.batch_size = 32;
  bcfg.seed = 11;
  const BatchSource source(trials, out.asv, nullptr, nullptr, bcfg);

  const std::vector<std::size_t> e0 = source.epoch_order(0);
  const std::vector<std::size_t> e1 = source.epoch_order(1);
  CHECK(e0 != e1);

  std::vector<std::size_t> sorted = e0;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(trials.size());
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);

  const BatchSource again(trials, out.asv, nullptr, nullptr, bcfg);
  CHECK(again.epoch_order(0) == e0);
  CHECK(again.epoch_order(1) == e1);

  BatchPlanConfig other = bcfg;
  other.seed = 12;
  const BatchSource reseeded(trials, out.asv, nullptr, nullptr, other);
  CHECK(reseeded.epoch_order(0) != e0);
}

TEST_CASE("batch rows are the concatenated store vectors with one-hot labels") {
  const SynthOutput out = synth_generate(tiny_config());
  TrialGenConfig tcfg;
  const std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);

  BatchPlanConfig bcfg;
  bcfg.batch_size = 16;
  bcfg.seed = 5;
  const BatchSource source(trials, out.asv, nullptr, nullptr, bcfg);
  const std::vector<std::size_t> order = source.epoch_order(2);
  const Batch batch = source.make_batch(order, 1);

  const std::size_t dim = out.asv.dim();
  for (std::size_t r = 0; r < batch.input.rows(); ++r) {
    const TrialPair& trial = trials[order[16 + r]];
    const float* enroll = out.asv.vec(trial.enroll_id);
    const float* test = out.asv.vec(trial.test_id);
    for (std::size_t d = 0; d < dim; ++d) {
      CHECK(batch.input(r, d) == static_cast<double>(enroll[d]));
      CHECK(batch.input(r, dim + d) == static_cast<double>(test[d]));
    }
    for (std::size_t c = 0; c < 3; ++c) {
      const double expected = c == static_cast<std::size_t>(trial.label) ? 1.0 : 0.0;
      CHECK(batch.class_targets(r, c) == expected);
    }
  }
}

TEST_CASE("regression targets copy the spoof embedding of the test utterance") {
  const SynthOutput out = synth_generate(tiny_config());
  TrialGenConfig tcfg;
  const std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);

  BatchPlanConfig bcfg;
  bcfg.batch_size = 32;
  bcfg.seed = 7;
  bcfg.need_reg = true;
  const BatchSource source(trials, out.asv, &out.meta, &out.cm, bcfg);
  CHECK(source.reg_dim() == out.cm.dim());

  const std::vector<std::size_t> order = source.epoch_order(0);
  const Batch batch = source.make_batch(order, 0);
  REQUIRE(batch.reg_targets.rows() == batch.input.rows());
  REQUIRE(batch.reg_targets.cols() == out.cm.dim());
  for (std::size_t r = 0; r < batch.reg_targets.rows(); ++r) {
    const TrialPair& trial = trials[order[r]];
    const float* cm = out.cm.vec(trial.test_id);
    for (std::size_t d = 0; d < out.cm.dim(); ++d) {
      CHECK(batch.reg_targets(r, d) == static_cast<double>(cm[d]));
    }
  }
}

TEST_CASE("attribute targets and appended regression blocks are one-hot") {
  const SynthOutput out = synth_generate(tiny_config());
  TrialGenConfig tcfg;
  const std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);

  BatchPlanConfig bcfg;
  bcfg.batch_size = 32;
  bcfg.seed = 9;
  bcfg.need_reg = true;
  bcfg.reg_include_attr = true;
  bcfg.need_attr = true;
  bcfg.attr_kind = AttrKind::kAttack;
  const BatchSource source(trials, out.asv, &out.meta, &out.cm, bcfg);

  const std::vector<std::string>& vocab = out.meta.vocab(AttrKind::kAttack);
  const std::size_t attr_dim = vocab.size() + 1;
  CHECK(source.attr_dim() == attr_dim);
  CHECK(source.reg_dim() == out.cm.dim() + attr_dim);

  const std::vector<std::size_t> order = source.epoch_order(0);
  const Batch batch = source.make_batch(order, 0);
  REQUIRE(batch.attr_targets.rows() == batch.input.rows());
  REQUIRE(batch.attr_targets.cols() == attr_dim);
  for (std::size_t r = 0; r < batch.attr_targets.rows(); ++r) {
    const TrialPair& trial = trials[order[r]];
    const UtteranceRecord& rec = out.meta.record(trial.test_id);
    const std::vector<double> onehot = encode_attribute(rec, AttrKind::kAttack, vocab);
    REQUIRE(onehot.size() == attr_dim);
    for (std::size_t c = 0; c < attr_dim; ++c) {
      CHECK(batch.attr_targets(r, c) == onehot[c]);
      CHECK(batch.reg_targets(r, out.cm.dim() + c) == onehot[c]);
    }
    if (rec.kind == UttKind::kBonafide) CHECK(onehot[0] == 1.0);
  }
}

TEST_CASE("preset attack vocabulary maps to a seven-way attribute target") {
  const SynthOutput out = synth_generate(separable_preset());
  TrialGenConfig tcfg;
  tcfg.mode = PairMode::kSampled;
  tcfg.cap_target = 50;
  tcfg.cap_nontarget = 50;
  tcfg.cap_spoof = 50;
  const std::vector<TrialPair> trials = generate_trials(out.meta, tcfg);

  BatchPlanConfig bcfg;
  bcfg.need_attr = true;
  bcfg.attr_kind = AttrKind::kAttack;
  const BatchSource source(trials, out.asv, &out.meta, nullptr, bcfg);
  CHECK(source.attr_dim() == 7);
}

}  // TEST_SUITE
