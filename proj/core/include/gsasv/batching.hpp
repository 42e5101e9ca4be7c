// core/include/gsasv/batching.hpp

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

#ifndef GSASV_BATCHING_HPP
#define GSASV_BATCHING_HPP

#include <cstdint>
#include <vector>

#include "gsasv/embedding.hpp"
#include "gsasv/matrix.hpp"
#include "gsasv/metadata.hpp"
#include "gsasv/trials.hpp"

namespace gsasv {

// Regression target for one trial: the spoof embedding of the test
// utterance, optionally concatenated with its attribute one-hot.
std::vector<double> make_reg_target(const UtteranceRecord& rec, const EmbeddingStore& cm,
                                    const std::vector<double>* attr_onehot);

struct Batch {
  Matrix input;          // rows of [enroll embedding, test embedding]
  Matrix class_targets;  // one-hot over (target, nontarget, spoof)
  Matrix reg_targets;    // empty unless requested
  Matrix attr_targets;   // one-hot, empty unless requested
};

struct BatchPlanConfig {
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
  bool need_reg = false;
  bool reg_include_attr = false;  // append the attribute one-hot to the target
  bool need_attr = false;
  AttrKind attr_kind = AttrKind::kAttack;
};

// Deterministic shuffled minibatches over a trial list. The permutation is
// keyed by (seed, epoch); the final short batch is kept.
class BatchSource {
 public:
  BatchSource(std::vector<TrialPair> trials, const EmbeddingStore& asv, const Metadata* meta,
              const EmbeddingStore* cm, const BatchPlanConfig& cfg);

  std::size_t num_trials() const { return trials_.size(); }
  std::size_t num_batches() const;
  std::size_t reg_dim() const { return reg_dim_; }
  std::size_t attr_dim() const { return attr_dim_; }
  const BatchPlanConfig& config() const { return cfg_; }

  std::vector<std::size_t> epoch_order(std::size_t epoch) const;
  Batch make_batch(const std::vector<std::size_t>& order, std::size_t batch_index) const;

 private:
  std::vector<TrialPair> trials_;
  const EmbeddingStore& asv_;
  BatchPlanConfig cfg_;
  std::vector<std::size_t> enroll_idx_;
  std::vector<std::size_t> test_idx_;
  std::vector<std::vector<double>> reg_targets_;   // per trial, when needed
  std::vector<std::vector<double>> attr_targets_;  // per trial, when needed
  std::size_t reg_dim_ = 0;
  std::size_t attr_dim_ = 0;
};

}  // namespace gsasv

#endif  // GSASV_BATCHING_HPP
