// core/src/trainer.cpp

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

#include "gsasv/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"

namespace gsasv {

std::string reg_loss_name(RegLossKind kind) {
  return kind == RegLossKind::kMse ? "mse" : "cosine";
}

RegLossKind reg_loss_from_name(const std::string& name) {
  if (name == "mse") return RegLossKind::kMse;
  if (name == "cosine") return RegLossKind::kCosine;
  throw ConfigError("unknown regression loss '" + name + "' (expected mse or cosine)");
}

void validate(const TrainConfig& cfg) {
  if (cfg.lr_init <= 0.0) throw ConfigError("lr_init must be positive");
  if (cfg.lr_decay_factor <= 0.0 || cfg.lr_decay_factor > 1.0) {
    throw ConfigError("lr_decay_factor must lie in (0, 1]");
  }
  if (cfg.lr_step_epochs == 0) throw ConfigError("lr_step_epochs must be positive");
  if (cfg.weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
  if (cfg.batch_size < 2) {
    throw ConfigError("batch_size must be at least 2 (batch normalization needs 2 rows)");
  }
  validate(cfg.loss_weights);
  validate(cfg.smoothing);
}

double lr_at(std::size_t epoch, const TrainConfig& cfg) {
  const double steps = std::floor(static_cast<double>(epoch) /
                                  static_cast<double>(cfg.lr_step_epochs));
  return cfg.lr_init * std::pow(cfg.lr_decay_factor, steps);
}

namespace {

void scale_matrix(Matrix& m, double s) {
  double* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) p[i] *= s;
}

Matrix smoothed_targets(const Matrix& onehot, const SmoothingConfig& cfg) {
  if (cfg.epsilon == 0.0) return onehot;
  Matrix q(onehot.rows(), onehot.cols());
  const double uniform = cfg.epsilon / static_cast<double>(onehot.cols());
  const double* src = onehot.data();
  double* dst = q.data();
  for (std::size_t i = 0; i < onehot.size(); ++i) dst[i] = (1.0 - cfg.epsilon) * src[i] + uniform;
  return q;
}

struct BatchLosses {
  double total = 0.0;
  double ce = 0.0;
  double reg = 0.0;
  double attr = 0.0;
};

BatchLosses train_step(Model& m, const Batch& b, const TrainConfig& cfg, GradBuffers& grads,
                       bool update_running) {
  zero_grads(grads);
  ForwardCache cache;
  ForwardOutput out = forward_train(m, b.input, cache, update_running);
  BatchLosses losses;
  losses.ce = cross_entropy(out.log_posteriors, b.class_targets);
  const bool has_reg = m.has_reg();
  const bool has_attr = m.has_attr();
  double w_ce = 1.0;
  double w_reg = 0.0;
  double w_attr = 0.0;
  Matrix attr_targets;
  if (has_reg) {
    losses.reg = cfg.reg_loss == RegLossKind::kMse
                     ? mse_loss(out.reg_prediction, b.reg_targets)
                     : cosine_loss(out.reg_prediction, b.reg_targets, cfg.cosine_denom);
    const LossWeights& w = cfg.loss_weights;
    if (has_attr) {
      attr_targets = smoothed_targets(b.attr_targets, cfg.smoothing);
      losses.attr = cross_entropy(out.attr_log_probs, attr_targets);
      losses.total = total_mt_attr(losses.ce, losses.reg, losses.attr, w);
      w_ce = w.lambda;
      w_reg = (1.0 - w.lambda) * (1.0 - w.gamma);
      w_attr = (1.0 - w.lambda) * w.gamma;
    } else {
      losses.total = total_mt(losses.ce, losses.reg, w);
      w_ce = w.lambda;
      w_reg = 1.0 - w.lambda;
    }
  } else {
    losses.total = losses.ce;
  }

  Matrix dlogp = cross_entropy_backward(out.log_posteriors, b.class_targets);
  scale_matrix(dlogp, w_ce);
  Matrix dreg;
  Matrix dattr;
  const Matrix* dreg_p = nullptr;
  const Matrix* dattr_p = nullptr;
  if (has_reg) {
    dreg = cfg.reg_loss == RegLossKind::kMse
               ? mse_backward(out.reg_prediction, b.reg_targets)
               : cosine_backward(out.reg_prediction, b.reg_targets, cfg.cosine_denom);
    scale_matrix(dreg, w_reg);
    dreg_p = &dreg;
  }
  if (has_attr) {
    dattr = cross_entropy_backward(out.attr_log_probs, attr_targets);
    scale_matrix(dattr, w_attr);
    dattr_p = &dattr;
  }
  backward(m, cache, dlogp, dreg_p, dattr_p, grads);
  return losses;
}

void check_data_compatible(const Model& m, const BatchSource& data, const TrainConfig& cfg) {
  validate(cfg);
  if (data.num_trials() == 0) throw ConfigError("training data holds no trials");
  if (data.config().batch_size != cfg.batch_size) {
    throw ConfigError("batch_size mismatch: config says " + std::to_string(cfg.batch_size) +
                      ", data source was built with " +
                      std::to_string(data.config().batch_size));
  }
  if (data.num_trials() % cfg.batch_size == 1) {
    throw ConfigError("final batch would hold a single trial, which batch normalization cannot "
                      "train on; adjust batch_size");
  }
  if (m.has_reg()) {
    if (!data.config().need_reg) {
      throw ConfigError("variant " + variant_name(m.cfg.variant) +
                        " needs regression targets but the data source provides none");
    }
    if (data.reg_dim() != m.cfg.reg_target_dim) {
      throw ConfigError("regression target dimension " + std::to_string(data.reg_dim()) +
                        " does not match the model's reg_target_dim " +
                        std::to_string(m.cfg.reg_target_dim));
    }
  }
  if (m.has_attr()) {
    if (!data.config().need_attr) {
      throw ConfigError("variant " + variant_name(m.cfg.variant) +
                        " needs attribute targets but the data source provides none");
    }
    if (data.attr_dim() != m.cfg.attr_classes) {
      throw ConfigError("attribute dimension " + std::to_string(data.attr_dim()) +
                        " does not match the model's attr_classes " +
                        std::to_string(m.cfg.attr_classes));
    }
    if (cfg.smoothing.k != 0 && cfg.smoothing.k != m.cfg.attr_classes) {
      throw ConfigError("smoothing K=" + std::to_string(cfg.smoothing.k) +
                        " does not match attr_classes " + std::to_string(m.cfg.attr_classes));
    }
  }
}

TrainLog run_epochs(Model& m, const BatchSource& data, const TrainConfig& cfg,
                    const std::vector<ParamRef>& params, const std::vector<ParamRef>& grad_refs,
                    GradBuffers& grads, bool update_running) {
  AdamState adam(params, cfg.adam);
  TrainLog log;
  const double n_total = static_cast<double>(data.num_trials());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_at(epoch, cfg);
    const std::vector<std::size_t> order = data.epoch_order(epoch);
    EpochLog e;
    e.epoch = epoch;
    e.lr = lr;
    e.has_reg = m.has_reg();
    e.has_attr = m.has_attr();
    for (std::size_t bi = 0; bi < data.num_batches(); ++bi) {
      const Batch b = data.make_batch(order, bi);
      const BatchLosses losses = train_step(m, b, cfg, grads, update_running);
      if (!std::isfinite(losses.total)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(bi));
      }
      adam.step(params, grad_refs, lr, cfg.weight_decay);
      const double rows = static_cast<double>(b.input.rows());
      e.loss_total += losses.total * rows;
      e.loss_ce += losses.ce * rows;
      e.loss_reg += losses.reg * rows;
      e.loss_attr += losses.attr * rows;
    }
    e.loss_total /= n_total;
    e.loss_ce /= n_total;
    e.loss_reg /= n_total;
    e.loss_attr /= n_total;
    log.epochs.push_back(e);
  }
  return log;
}

}  // namespace

TrainLog train(Model& m, const BatchSource& data, const TrainConfig& cfg) {
  check_data_compatible(m, data, cfg);
  GradBuffers grads = make_grad_buffers(m);
  const std::vector<ParamRef> params = trainable_params(m);
  const std::vector<ParamRef> grad_refs = trainable_grads(grads, m);
  return run_epochs(m, data, cfg, params, grad_refs, grads, /*update_running=*/true);
}

TrainLog adapt(Model& m, const BatchSource& data, const AdaptConfig& cfg) {
  if (cfg.add_srelu) insert_srelu(m);
  check_data_compatible(m, data, cfg.train);
  GradBuffers grads = make_grad_buffers(m);
  const std::vector<ParamRef> params = select_params(m, cfg.groups);
  const std::vector<ParamRef> grad_refs = select_grads(grads, m, cfg.groups);
  if (params.empty()) throw ConfigError("adaptation selects no parameters");
  // Batch-normalization running statistics move only when the BN group
  // itself is adapted; a frozen group stays frozen to the last bit,
  // buffers included.
  bool bn_selected = false;
  for (const ParamRef& p : params) {
    if (p.group == ParamGroup::kBn) bn_selected = true;
  }
  return run_epochs(m, data, cfg.train, params, grad_refs, grads, bn_selected);
}

void write_train_log(const TrainLog& log, const std::string& path) {
  atomic_write_file(path, train_log_to_tsv(log));
}

std::string train_log_to_tsv(const TrainLog& log) {
  std::ostringstream out;
  out << "#epoch\tlr\tloss_total\tloss_ce\tloss_reg\tloss_attr\n";
  for (const EpochLog& e : log.epochs) {
    char lr_buf[32];
    std::snprintf(lr_buf, sizeof lr_buf, "%.9g", e.lr);
    out << e.epoch << '\t' << lr_buf << '\t' << format_fixed6(e.loss_total) << '\t'
        << format_fixed6(e.loss_ce) << '\t'
        << (e.has_reg ? format_fixed6(e.loss_reg) : std::string("-")) << '\t'
        << (e.has_attr ? format_fixed6(e.loss_attr) : std::string("-")) << '\n';
  }
  return out.str();
}

}  // namespace gsasv
