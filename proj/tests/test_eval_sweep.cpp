// tests/test_eval_sweep.cpp

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
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "gsasv/eer.hpp"
#include "gsasv/errors.hpp"
#include "gsasv/eval.hpp"
#include "gsasv/scoring.hpp"
#include "gsasv/sweep.hpp"
#include "gsasv/synth.hpp"
#include "gsasv/trials.hpp"

using namespace gsasv;

namespace {

std::vector<TrialPair> labeled_trials() {
  return {
      {"e1", "t1", TrialLabel::kTarget},    {"e2", "t2", TrialLabel::kTarget},
      {"e3", "t3", TrialLabel::kTarget},    {"e4", "t4", TrialLabel::kNontarget},
      {"e5", "t5", TrialLabel::kNontarget}, {"e6", "t6", TrialLabel::kSpoof},
      {"e7", "t7", TrialLabel::kSpoof},
  };
}

const std::vector<double> kScores{5.0, 4.0, 3.0, 1.0, 0.0, 2.0, -1.0};

struct SweepFixture {
  SynthOutput data;
  std::vector<TrialPair> train_trials;
  std::vector<TrialPair> eval_trials;

  SweepFixture() {
    SynthConfig scfg;
    scfg.n_speakers = 3;
    scfg.utts_per_speaker = 4;
    scfg.n_attacks = 2;
    scfg.spoofs_per_speaker_per_attack = 2;
    scfg.asv_dim = 6;
    scfg.cm_dim = 5;
    scfg.n_vocoders = 3;
    scfg.n_synthesizers = 4;
    scfg.n_wavegens = 2;
    scfg.seed = 41;
    data = synth_generate(scfg);
    const std::vector<TrialPair> all = generate_trials(data.meta, TrialGenConfig{});
    const TrialSplit split = split_trials(all, 0.25, 11);
    train_trials = split.train;
    eval_trials = split.eval;
  }

  SweepContext context(Variant variant) const {
    SweepContext ctx;
    ctx.model.input_dim = 12;
    ctx.model.hidden_dims = {5, 4};
    ctx.model.variant = variant;
    if (variant != Variant::kBase) ctx.model.reg_target_dim = data.cm.dim();
    ctx.model.seed = 43;
    ctx.train.batch_size = 16;
    ctx.train.epochs = 1;
    ctx.train.seed = 47;
    ctx.batching.batch_size = 16;
    ctx.batching.seed = 53;
    ctx.train_trials = &train_trials;
    ctx.eval_trials = &eval_trials;
    ctx.asv = &data.asv;
    ctx.cm = &data.cm;
    ctx.meta = &data.meta;
    return ctx;
  }
};

}  // namespace

TEST_SUITE("eval_sweep") {

TEST_CASE("evaluate_scores partitions negatives per task") {
  const std::vector<TrialPair> trials = labeled_trials();
  const EvalReport report = evaluate_scores(trials, kScores, 0.9);

  CHECK(report.alpha == 0.9);
  CHECK(report.counts.n_target == 3);
  CHECK(report.counts.n_nontarget == 2);
  CHECK(report.counts.n_spoof == 2);

  const std::vector<double> pos{5.0, 4.0, 3.0};
  const EerResult joint = compute_eer(pos, {1.0, 0.0, 2.0, -1.0});
  const EerResult bona = compute_eer(pos, {1.0, 0.0});
  const EerResult spoof = compute_eer(pos, {2.0, -1.0});

  REQUIRE(report.joint.defined);
  REQUIRE(report.bonafide.defined);
  REQUIRE(report.spoof.defined);
  CHECK(report.joint.eer == joint.eer);
  CHECK(report.joint.threshold == joint.threshold);
  CHECK(report.bonafide.eer == bona.eer);
  CHECK(report.spoof.eer == spoof.eer);
}

TEST_CASE("an absent negative class leaves its entry undefined") {
  std::vector<TrialPair> trials = labeled_trials();
  std::vector<double> scores = kScores;
  trials.resize(5);  // drop the spoof trials
  scores.resize(5);

  const EvalReport report = evaluate_scores(trials, scores, 0.95);
  CHECK(report.joint.defined);
  CHECK(report.bonafide.defined);
  CHECK_FALSE(report.spoof.defined);
  CHECK(report.counts.n_spoof == 0);
}

TEST_CASE("evaluation rejects shape mismatch and missing targets") {
  const std::vector<TrialPair> trials = labeled_trials();
  CHECK_THROWS_AS(evaluate_scores(trials, {1.0, 2.0}, 0.95), ShapeError);

  std::vector<TrialPair> no_targets(trials.begin() + 3, trials.end());
  const std::vector<double> scores{1.0, 0.0, 2.0, -1.0};
  CHECK_THROWS_AS(evaluate_scores(no_targets, scores, 0.95), EvalError);
}

TEST_CASE("report JSON is parseable, complete and stable") {
  const EvalReport report = evaluate_scores(labeled_trials(), kScores, 0.9);
  const std::string text = eval_report_to_json(report);
  CHECK(text == eval_report_to_json(report));

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("alpha").get<double>() == 0.9);
  CHECK(j.at("counts").at("n_target").get<std::size_t>() == 3);
  CHECK(j.at("joint").at("defined").get<bool>());
  CHECK(j.at("joint").at("eer").is_number());
  CHECK(j.at("bonafide").at("threshold").is_number());
  CHECK(j.at("spoof").at("eer").is_number());

  std::vector<TrialPair> trials = labeled_trials();
  std::vector<double> scores = kScores;
  trials.resize(5);
  scores.resize(5);
  const nlohmann::json undef =
      nlohmann::json::parse(eval_report_to_json(evaluate_scores(trials, scores, 0.95)));
  CHECK_FALSE(undef.at("spoof").at("defined").get<bool>());
  CHECK(undef.at("spoof").at("eer").is_null());
}

TEST_CASE("grid parsing accepts ranges and lists") {
  const std::vector<double> alpha_grid = parse_grid("0:0.05:1");
  REQUIRE(alpha_grid.size() == 21);
  CHECK(alpha_grid.front() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(alpha_grid.back() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    CHECK(std::fabs(alpha_grid[i] - 0.05 * static_cast<double>(i)) < 1e-9);
  }

  const std::vector<double> quarters = parse_grid("0:0.25:1");
  REQUIRE(quarters.size() == 5);
  CHECK(quarters[3] == doctest::Approx(0.75).epsilon(1e-12));

  const std::vector<double> listed = parse_grid("0.1,0.5,0.9");
  REQUIRE(listed.size() == 3);
  CHECK(listed[0] == 0.1);
  CHECK(listed[1] == 0.5);
  CHECK(listed[2] == 0.9);

  CHECK_THROWS_AS(parse_grid(""), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("2:1:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("abc"), ConfigError);
}

TEST_CASE("sweep parameter names round trip") {
  for (SweepParam p :
       {SweepParam::kAlpha, SweepParam::kLambda, SweepParam::kGamma, SweepParam::kEpsilon}) {
    CHECK(sweep_param_from_name(sweep_param_name(p)) == p);
  }
  CHECK_THROWS_AS(sweep_param_from_name("beta"), ConfigError);
}

TEST_CASE("alpha sweep rescoring matches direct evaluation") {
  const SweepFixture fx;
  ModelConfig mc;
  mc.input_dim = 12;
  mc.hidden_dims = {5, 4};
  mc.seed = 59;
  const Model m = build_model(mc);

  const std::vector<PosteriorTriple> post = score_posteriors(m, fx.eval_trials, fx.data.asv);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const std::vector<SweepRow> rows = sweep_alpha(fx.eval_trials, post, grid);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].value == grid[i]);
    ScoringConfig scfg;
    scfg.alpha = grid[i];
    const EvalReport direct =
        evaluate_scores(fx.eval_trials, llr_scores(post, scfg), grid[i]);
    CHECK(rows[i].report.joint.eer == direct.joint.eer);
    CHECK(rows[i].report.bonafide.eer == direct.bonafide.eer);
    CHECK(rows[i].report.spoof.eer == direct.spoof.eer);
  }

  const std::string tsv = sweep_to_tsv(SweepParam::kAlpha, rows);
  CHECK(tsv.rfind("#param\tvalue\teer_joint\teer_bonafide\teer_spoof\n", 0) == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 4);
}

TEST_CASE("lambda sweep trains one model per grid value, deterministically") {
  const SweepFixture fx;
  const SweepContext ctx = fx.context(Variant::kSps);
  const std::vector<double> grid{0.3, 0.7};

  const std::vector<SweepRow> rows = run_sweep(SweepParam::kLambda, grid, ctx);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].value == 0.3);
  CHECK(rows[1].value == 0.7);
  CHECK(rows[0].report.joint.defined);
  CHECK(rows[0].report.counts.n_target == count_trials(fx.eval_trials).target);

  const std::vector<SweepRow> again = run_sweep(SweepParam::kLambda, grid, ctx);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].report.joint.eer == again[i].report.joint.eer);
    CHECK(rows[i].report.spoof.eer == again[i].report.spoof.eer);
  }
}

TEST_CASE("attribute sweep produces one row per kind with derived widths") {
  const SweepFixture fx;
  const SweepContext ctx = fx.context(Variant::kSpsAttr);

  const std::vector<AttrSweepRow> rows = sweep_attr_kinds(ctx);
  REQUIRE(rows.size() == 4);
  const std::vector<AttrKind>& kinds = all_attr_kinds();
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rows[i].kind == kinds[i]);
    CHECK(rows[i].attr_dim == fx.data.meta.vocab(kinds[i]).size() + 1);
    CHECK(rows[i].report.joint.defined);
  }
  CHECK(rows[0].attr_dim == 3);
  CHECK(rows[1].attr_dim == 4);
  CHECK(rows[2].attr_dim == 5);
  CHECK(rows[3].attr_dim == 3);

  const std::string tsv = attr_sweep_to_tsv(rows);
  CHECK(tsv.rfind("#kind\tattr_dim\teer_joint\teer_bonafide\teer_spoof\n", 0) == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 5);
}

}  // TEST_SUITE
