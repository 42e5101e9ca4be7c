// core/include/gsasv/sweep.hpp

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

#ifndef GSASV_SWEEP_HPP
#define GSASV_SWEEP_HPP

#include <string>
#include <vector>

#include "gsasv/batching.hpp"
#include "gsasv/eval.hpp"
#include "gsasv/scoring.hpp"
#include "gsasv/trainer.hpp"

namespace gsasv {

enum class SweepParam { kAlpha, kLambda, kGamma, kEpsilon };

std::string sweep_param_name(SweepParam p);
SweepParam sweep_param_from_name(const std::string& name);

// "start:step:stop" (inclusive) or a comma-separated value list.
std::vector<double> parse_grid(const std::string& text);

struct SweepRow {
  double value = 0.0;
  EvalReport report;
};

// Rescoring only: the posteriors are fixed, alpha varies. No forward passes.
std::vector<SweepRow> sweep_alpha(const std::vector<TrialPair>& trials,
                                  const std::vector<PosteriorTriple>& posteriors,
                                  const std::vector<double>& grid, double floor = 1e-30);

struct SweepContext {
  ModelConfig model;
  TrainConfig train;
  ScoringConfig scoring;
  BatchPlanConfig batching;  // need_reg/need_attr/attr_dim are derived per point
  const std::vector<TrialPair>* train_trials = nullptr;
  const std::vector<TrialPair>* eval_trials = nullptr;
  const EmbeddingStore* asv = nullptr;
  const EmbeddingStore* cm = nullptr;
  const Metadata* meta = nullptr;
  std::size_t threads = 1;
};

// Alpha: one training run, then rescoring per grid value. Lambda, gamma,
// epsilon: one full training run per grid value from the shared base seed.
std::vector<SweepRow> run_sweep(SweepParam param, const std::vector<double>& grid,
                                const SweepContext& ctx);

struct AttrSweepRow {
  AttrKind kind = AttrKind::kAttack;
  std::size_t attr_dim = 0;
  EvalReport report;
};

// One training run per attribute kind; the attribute head width follows the
// declared vocabulary (|vocab| + 1).
std::vector<AttrSweepRow> sweep_attr_kinds(const SweepContext& ctx);

std::string sweep_to_tsv(SweepParam param, const std::vector<SweepRow>& rows);
std::string attr_sweep_to_tsv(const std::vector<AttrSweepRow>& rows);

}  // namespace gsasv

#endif  // GSASV_SWEEP_HPP
