// core/include/gsasv/experiment.hpp

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

#ifndef GSASV_EXPERIMENT_HPP
#define GSASV_EXPERIMENT_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gsasv/batching.hpp"
#include "gsasv/model.hpp"
#include "gsasv/scoring.hpp"
#include "gsasv/synth.hpp"
#include "gsasv/trainer.hpp"
#include "gsasv/trials.hpp"

namespace gsasv {

std::string cosine_denominator_name(CosineDenominator d);
CosineDenominator cosine_denominator_from_name(const std::string& name);

// One experiment document. JSON sections: data, model, train, adapt,
// scoring, eval, sweep, plus a top-level seed that feeds every module
// seed on resolve. Precedence is flags > file > defaults; unknown keys
// are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 1;

  // data
  std::string asv_path;
  std::string cm_path;
  std::string metadata_path;
  std::string trials_path;
  SynthConfig synth;
  TrialGenConfig pairing;
  double eval_fraction = 0.2;

  ModelConfig model;

  TrainConfig train;
  bool reg_include_attr = false;
  AttrKind attr_kind = AttrKind::kAttack;

  bool has_adapt = false;
  std::set<std::string> adapt_groups;
  bool adapt_add_srelu = false;
  TrainConfig adapt_train;  // train section plus adapt-section overrides

  ScoringConfig scoring;

  std::string eval_trials_path;

  std::string sweep_param;  // empty when no sweep section is present
  std::string sweep_grid;
};

// Strict merge of a JSON document onto cfg. Unknown keys or wrong types
// raise ConfigError naming the key.
void apply_experiment_json(ExperimentConfig& cfg, const std::string& json_text);

// Pushes the top-level seed into every module config.
void resolve_seeds(ExperimentConfig& cfg);

// Canonical echo: every section present, every default filled in.
std::string resolved_experiment_json(const ExperimentConfig& cfg);

struct InputRecord {
  std::string path;
  std::uint64_t bytes = 0;
  std::uint32_t crc = 0;
};

InputRecord record_input(const std::string& path);

// Replayable run record: command, resolved config, input hashes, outputs,
// seed, and format versions.
std::string manifest_json(const std::string& command, const ExperimentConfig& cfg,
                          const std::vector<InputRecord>& inputs,
                          const std::vector<std::string>& outputs);

}  // namespace gsasv

#endif  // GSASV_EXPERIMENT_HPP
