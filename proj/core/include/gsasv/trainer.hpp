// core/include/gsasv/trainer.hpp

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

#ifndef GSASV_TRAINER_HPP
#define GSASV_TRAINER_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gsasv/adam.hpp"
#include "gsasv/batching.hpp"
#include "gsasv/losses.hpp"
#include "gsasv/model.hpp"

namespace gsasv {

enum class RegLossKind { kMse, kCosine };

std::string reg_loss_name(RegLossKind kind);
RegLossKind reg_loss_from_name(const std::string& name);

struct TrainConfig {
  double lr_init = 0.001;
  double lr_decay_factor = 0.1;  // multiplication factor of the step decay
  std::size_t lr_step_epochs = 10;
  double weight_decay = 1e-7;
  std::size_t batch_size = 128;
  std::size_t epochs = 20;
  LossWeights loss_weights;
  SmoothingConfig smoothing;  // attribute branch only; k filled from the model
  RegLossKind reg_loss = RegLossKind::kCosine;
  CosineDenominator cosine_denom = CosineDenominator::kProduct;
  AdamConfig adam;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

// lr_init * decay^floor(epoch / step_epochs), epochs counted from 0.
double lr_at(std::size_t epoch, const TrainConfig& cfg);

struct EpochLog {
  std::size_t epoch = 0;
  double lr = 0.0;
  double loss_total = 0.0;
  double loss_ce = 0.0;
  double loss_reg = 0.0;
  double loss_attr = 0.0;
  bool has_reg = false;
  bool has_attr = false;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
};

// TSV: "epoch TAB lr TAB loss_total TAB loss_ce TAB loss_reg TAB loss_attr",
// "-" where a component does not apply.
void write_train_log(const TrainLog& log, const std::string& path);
std::string train_log_to_tsv(const TrainLog& log);

// Full training: shuffled minibatches, the variant's composite loss, Adam
// with step LR decay. Deterministic for fixed (model, data, config).
TrainLog train(Model& m, const BatchSource& data, const TrainConfig& cfg);

struct AdaptConfig {
  std::set<std::string> groups;  // NETWORK, FC, BN, SRELU
  bool add_srelu = false;
  TrainConfig train;
};

// Domain adaptation: only scalars in the selected groups move; everything
// else stays bit-identical. add_srelu first inserts identity sReLU scalers.
// Optimizer state is fresh for the adaptation phase.
TrainLog adapt(Model& m, const BatchSource& data, const AdaptConfig& cfg);

}  // namespace gsasv

#endif  // GSASV_TRAINER_HPP
