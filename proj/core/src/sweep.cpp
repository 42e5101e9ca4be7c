// core/src/sweep.cpp

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

#include "gsasv/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"

namespace gsasv {

std::string sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kAlpha: return "alpha";
    case SweepParam::kLambda: return "lambda";
    case SweepParam::kGamma: return "gamma";
    case SweepParam::kEpsilon: return "epsilon";
  }
  throw ConfigError("bad sweep parameter");
}

SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "alpha") return SweepParam::kAlpha;
  if (name == "lambda") return SweepParam::kLambda;
  if (name == "gamma") return SweepParam::kGamma;
  if (name == "epsilon") return SweepParam::kEpsilon;
  throw ConfigError("unknown sweep parameter '" + name +
                    "' (expected alpha, lambda, gamma or epsilon)");
}

namespace {

double parse_number(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("bad grid number '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("empty grid");
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = text.find(':', start);
      if (pos == std::string::npos) {
        parts.push_back(text.substr(start));
        break;
      }
      parts.push_back(text.substr(start, pos - start));
      start = pos + 1;
    }
    if (parts.size() != 3) throw ConfigError("range grid must be start:step:stop");
    const double lo = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    if (step <= 0.0) throw ConfigError("grid step must be positive");
    if (hi < lo) throw ConfigError("grid stop must not precede start");
    const std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) values.push_back(lo + static_cast<double>(i) * step);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t pos = text.find(',', start);
      const std::string item =
          pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
      values.push_back(parse_number(item));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  if (values.empty()) throw ConfigError("empty grid");
  return values;
}

std::vector<SweepRow> sweep_alpha(const std::vector<TrialPair>& trials,
                                  const std::vector<PosteriorTriple>& posteriors,
                                  const std::vector<double>& grid, double floor) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double alpha : grid) {
    ScoringConfig cfg;
    cfg.alpha = alpha;
    cfg.floor = floor;
    validate(cfg);
    SweepRow row;
    row.value = alpha;
    row.report = evaluate_scores(trials, llr_scores(posteriors, cfg), alpha);
    rows.push_back(row);
  }
  return rows;
}

namespace {

void check_context(const SweepContext& ctx) {
  if (ctx.train_trials == nullptr || ctx.eval_trials == nullptr || ctx.asv == nullptr) {
    throw ConfigError("sweep context is missing trials or embeddings");
  }
}

BatchPlanConfig plan_for(const SweepContext& ctx, const ModelConfig& mc,
                         const TrainConfig& tc) {
  BatchPlanConfig plan = ctx.batching;
  plan.batch_size = tc.batch_size;
  plan.need_reg = variant_has_reg(mc.variant);
  plan.need_attr = variant_has_attr(mc.variant);
  return plan;
}

EvalReport train_and_evaluate(const SweepContext& ctx, const ModelConfig& mc,
                              const TrainConfig& tc) {
  Model m = build_model(mc);
  const BatchSource data(*ctx.train_trials, *ctx.asv, ctx.meta, ctx.cm, plan_for(ctx, mc, tc));
  train(m, data, tc);
  const std::vector<PosteriorTriple> posts =
      score_posteriors(m, *ctx.eval_trials, *ctx.asv, ctx.threads);
  return evaluate_scores(*ctx.eval_trials, llr_scores(posts, ctx.scoring), ctx.scoring.alpha);
}

}  // namespace

std::vector<SweepRow> run_sweep(SweepParam param, const std::vector<double>& grid,
                                const SweepContext& ctx) {
  check_context(ctx);
  if (grid.empty()) throw ConfigError("empty grid");
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("grid value " + std::to_string(v) + " outside [0, 1] for " +
                        sweep_param_name(param));
    }
  }
  if (param == SweepParam::kLambda && !variant_has_reg(ctx.model.variant)) {
    throw ConfigError("lambda sweep needs a multi-task variant");
  }
  if ((param == SweepParam::kGamma || param == SweepParam::kEpsilon) &&
      !variant_has_attr(ctx.model.variant)) {
    throw ConfigError(sweep_param_name(param) + " sweep needs an attribute variant");
  }

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  if (param == SweepParam::kAlpha) {
    Model m = build_model(ctx.model);
    const BatchSource data(*ctx.train_trials, *ctx.asv, ctx.meta, ctx.cm,
                           plan_for(ctx, ctx.model, ctx.train));
    train(m, data, ctx.train);
    const std::vector<PosteriorTriple> posts =
        score_posteriors(m, *ctx.eval_trials, *ctx.asv, ctx.threads);
    return sweep_alpha(*ctx.eval_trials, posts, grid, ctx.scoring.floor);
  }

  for (double v : grid) {
    TrainConfig tc = ctx.train;
    switch (param) {
      case SweepParam::kLambda: tc.loss_weights.lambda = v; break;
      case SweepParam::kGamma: tc.loss_weights.gamma = v; break;
      case SweepParam::kEpsilon:
        tc.smoothing.epsilon = v;
        tc.smoothing.k = ctx.model.attr_classes;
        break;
      case SweepParam::kAlpha: break;
    }
    SweepRow row;
    row.value = v;
    row.report = train_and_evaluate(ctx, ctx.model, tc);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AttrSweepRow> sweep_attr_kinds(const SweepContext& ctx) {
  check_context(ctx);
  if (!variant_has_attr(ctx.model.variant)) {
    throw ConfigError("attribute sweep needs an attribute variant");
  }
  if (ctx.meta == nullptr) throw ConfigError("attribute sweep needs metadata");
  if (ctx.batching.reg_include_attr) {
    throw ConfigError("attribute sweep keeps the regression target fixed; disable "
                      "reg_include_attr");
  }
  std::vector<AttrSweepRow> rows;
  for (AttrKind kind : all_attr_kinds()) {
    const std::size_t dim = ctx.meta->vocab(kind).size() + 1;
    ModelConfig mc = ctx.model;
    mc.attr_classes = dim;
    TrainConfig tc = ctx.train;
    if (tc.smoothing.k != 0) tc.smoothing.k = dim;
    SweepContext point = ctx;
    point.batching.attr_kind = kind;
    AttrSweepRow row;
    row.kind = kind;
    row.attr_dim = dim;
    row.report = train_and_evaluate(point, mc, tc);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string entry_or_dash(const EvalEntry& e) {
  return e.defined ? format_fixed6(e.eer) : std::string("-");
}

}  // namespace

std::string sweep_to_tsv(SweepParam param, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "#param\tvalue\teer_joint\teer_bonafide\teer_spoof\n";
  for (const SweepRow& r : rows) {
    out << sweep_param_name(param) << '\t' << format_fixed6(r.value) << '\t'
        << entry_or_dash(r.report.joint) << '\t' << entry_or_dash(r.report.bonafide) << '\t'
        << entry_or_dash(r.report.spoof) << '\n';
  }
  return out.str();
}

std::string attr_sweep_to_tsv(const std::vector<AttrSweepRow>& rows) {
  std::ostringstream out;
  out << "#kind\tattr_dim\teer_joint\teer_bonafide\teer_spoof\n";
  for (const AttrSweepRow& r : rows) {
    out << attr_kind_name(r.kind) << '\t' << r.attr_dim << '\t' << entry_or_dash(r.report.joint)
        << '\t' << entry_or_dash(r.report.bonafide) << '\t' << entry_or_dash(r.report.spoof)
        << '\n';
  }
  return out.str();
}

}  // namespace gsasv
