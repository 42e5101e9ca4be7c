// core/src/batching.cpp

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

#include "gsasv/batching.hpp"

#include <string>

#include "gsasv/errors.hpp"
#include "gsasv/rng.hpp"

namespace gsasv {

std::vector<double> make_reg_target(const UtteranceRecord& rec, const EmbeddingStore& cm,
                                    const std::vector<double>* attr_onehot) {
  const float* v = cm.vec(rec.utt_id);
  std::vector<double> target(v, v + cm.dim());
  if (attr_onehot) target.insert(target.end(), attr_onehot->begin(), attr_onehot->end());
  return target;
}

BatchSource::BatchSource(std::vector<TrialPair> trials, const EmbeddingStore& asv,
                         const Metadata* meta, const EmbeddingStore* cm,
                         const BatchPlanConfig& cfg)
    : trials_(std::move(trials)), asv_(asv), cfg_(cfg) {
  if (cfg_.batch_size == 0) throw ConfigError("batch size must be positive");
  const bool wants_attr_vec = cfg_.need_attr || (cfg_.need_reg && cfg_.reg_include_attr);
  if (cfg_.need_reg && !cm) {
    throw ConfigError("regression targets requested but no spoof-embedding store supplied");
  }
  if (wants_attr_vec && !meta) {
    throw ConfigError("attribute targets requested but no metadata supplied");
  }
  enroll_idx_.reserve(trials_.size());
  test_idx_.reserve(trials_.size());
  const std::vector<std::string>* vocab = nullptr;
  if (wants_attr_vec) {
    vocab = &meta->vocab(cfg_.attr_kind);
    attr_dim_ = vocab->size() + 1;
  }
  for (const TrialPair& t : trials_) {
    try {
      enroll_idx_.push_back(asv_.index_of(t.enroll_id));
      test_idx_.push_back(asv_.index_of(t.test_id));
    } catch (const DataError& e) {
      throw DataError("trial (" + t.enroll_id + ", " + t.test_id + "): " + std::string(e.what()));
    }
    if (wants_attr_vec || cfg_.need_reg) {
      std::vector<double> attr;
      if (wants_attr_vec) {
        const UtteranceRecord& rec = meta->record(t.test_id);
        attr = encode_attribute(rec, cfg_.attr_kind, *vocab);
      }
      if (cfg_.need_reg) {
        UtteranceRecord plain;
        plain.utt_id = t.test_id;
        const UtteranceRecord& rec = meta ? meta->record(t.test_id) : plain;
        try {
          reg_targets_.push_back(
              make_reg_target(rec, *cm, cfg_.reg_include_attr ? &attr : nullptr));
        } catch (const DataError& e) {
          throw DataError("trial (" + t.enroll_id + ", " + t.test_id + "): " +
                          std::string(e.what()));
        }
      }
      if (cfg_.need_attr) attr_targets_.push_back(std::move(attr));
    }
  }
  if (cfg_.need_reg && !reg_targets_.empty()) reg_dim_ = reg_targets_.front().size();
}

std::size_t BatchSource::num_batches() const {
  return (trials_.size() + cfg_.batch_size - 1) / cfg_.batch_size;
}

std::vector<std::size_t> BatchSource::epoch_order(std::size_t epoch) const {
  std::vector<std::size_t> order(trials_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(cfg_.seed, "shuffle-epoch-" + std::to_string(epoch)));
  rng.shuffle(order);
  return order;
}

Batch BatchSource::make_batch(const std::vector<std::size_t>& order,
                              std::size_t batch_index) const {
  const std::size_t start = batch_index * cfg_.batch_size;
  if (start >= order.size()) {
    throw DomainError("batch index " + std::to_string(batch_index) + " out of range");
  }
  const std::size_t end = std::min(start + cfg_.batch_size, order.size());
  const std::size_t rows = end - start;
  const std::size_t dim = asv_.dim();

  Batch b;
  b.input = Matrix(rows, 2 * dim);
  b.class_targets = Matrix(rows, 3);
  if (cfg_.need_reg) b.reg_targets = Matrix(rows, reg_dim_);
  if (cfg_.need_attr) b.attr_targets = Matrix(rows, attr_dim_);

  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = order[start + r];
    const float* e = asv_.vec_at(enroll_idx_[t]);
    const float* s = asv_.vec_at(test_idx_[t]);
    double* row = b.input.row(r);
    for (std::size_t j = 0; j < dim; ++j) row[j] = e[j];
    for (std::size_t j = 0; j < dim; ++j) row[dim + j] = s[j];
    b.class_targets(r, static_cast<std::size_t>(trials_[t].label)) = 1.0;
    if (cfg_.need_reg) {
      const std::vector<double>& target = reg_targets_[t];
      double* dst = b.reg_targets.row(r);
      for (std::size_t j = 0; j < reg_dim_; ++j) dst[j] = target[j];
    }
    if (cfg_.need_attr) {
      const std::vector<double>& target = attr_targets_[t];
      double* dst = b.attr_targets.row(r);
      for (std::size_t j = 0; j < attr_dim_; ++j) dst[j] = target[j];
    }
  }
  return b;
}

}  // namespace gsasv
