// core/selfcheck/selfcheck.cpp

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

#include "selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "gsasv/errors.hpp"
#include "gsasv/grad_check.hpp"
#include "gsasv/layers.hpp"
#include "gsasv/losses.hpp"
#include "gsasv/model.hpp"
#include "gsasv/rng.hpp"
#include "gsasv/trainer.hpp"

namespace gsasv::selfcheck {

EerResult eer_bruteforce(const std::vector<double>& positives,
                         const std::vector<double>& negatives) {
  if (positives.empty() || negatives.empty()) throw EvalError("empty score list");
  std::vector<double> distinct;
  distinct.insert(distinct.end(), positives.begin(), positives.end());
  distinct.insert(distinct.end(), negatives.begin(), negatives.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> thresholds;
  thresholds.push_back(distinct.front() - 1.0);
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    thresholds.push_back(0.5 * (distinct[i] + distinct[i + 1]));
  }
  thresholds.push_back(distinct.back() + 1.0);

  std::vector<double> fars;
  std::vector<double> frrs;
  for (double t : thresholds) {
    std::size_t accepts = 0;
    for (double s : negatives) {
      if (s >= t) ++accepts;
    }
    std::size_t rejects = 0;
    for (double s : positives) {
      if (s < t) ++rejects;
    }
    fars.push_back(static_cast<double>(accepts) / static_cast<double>(negatives.size()));
    frrs.push_back(static_cast<double>(rejects) / static_cast<double>(positives.size()));
  }

  for (std::size_t i = 0; i + 1 < thresholds.size(); ++i) {
    const double di = fars[i] - frrs[i];
    const double dj = fars[i + 1] - frrs[i + 1];
    if (di >= 0.0 && dj <= 0.0) {
      const double t = (di - dj) > 0.0 ? di / (di - dj) : 0.0;
      EerResult r;
      r.eer = (fars[i] + t * (fars[i + 1] - fars[i])) * 100.0;
      r.threshold = thresholds[i] + t * (thresholds[i + 1] - thresholds[i]);
      return r;
    }
  }
  throw EvalError("no crossing found");
}

std::vector<TrialPair> enumerate_trials_bruteforce(const Metadata& meta, bool ordered) {
  const std::vector<UtteranceRecord>& recs = meta.records;
  std::vector<TrialPair> out;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = 0; j < recs.size(); ++j) {
      if (i == j) continue;
      const UtteranceRecord& a = recs[i];
      const UtteranceRecord& b = recs[j];
      if (a.kind != UttKind::kBonafide) continue;
      if (b.kind == UttKind::kBonafide) {
        if (!ordered && !(a.utt_id < b.utt_id)) continue;
        const TrialLabel label = a.speaker_id == b.speaker_id ? TrialLabel::kTarget
                                                              : TrialLabel::kNontarget;
        out.push_back(TrialPair{a.utt_id, b.utt_id, label});
      } else if (a.speaker_id == b.speaker_id) {
        out.push_back(TrialPair{a.utt_id, b.utt_id, TrialLabel::kSpoof});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const TrialPair& x, const TrialPair& y) {
    if (x.label != y.label) return static_cast<int>(x.label) < static_cast<int>(y.label);
    if (x.enroll_id != y.enroll_id) return x.enroll_id < y.enroll_id;
    return x.test_id < y.test_id;
  });
  return out;
}

namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// Normal draws pushed away from zero so ReLU-style gates never sit within
// finite-difference reach of their kink.
Matrix random_off_zero(Rng& rng, std::size_t rows, std::size_t cols, double margin) {
  Matrix m = random_matrix(rng, rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double& v = m.data()[i];
    if (std::fabs(v) < margin) v = v < 0.0 ? v - margin : v + margin;
  }
  return m;
}

double weighted_sum(const Matrix& m, const Matrix& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m.data()[i] * c.data()[i];
  return s;
}

Matrix onehot_rows(Rng& rng, std::size_t rows, std::size_t classes) {
  Matrix t(rows, classes);
  for (std::size_t r = 0; r < rows; ++r) t(r, rng.below(classes)) = 1.0;
  return t;
}

CheckResult make_result(const std::string& name, double value, double limit) {
  return CheckResult{name, value, limit, value < limit};
}

constexpr std::size_t kPoints = 10;
constexpr double kSmoothLimit = 1e-6;
constexpr double kGatedLimit = 1e-4;
constexpr double kGradMargin = 1e-3;
constexpr int kRedraws = 200;

// A probe point is degenerate when an analytic gradient entry sits inside
// the finite-difference noise band. Exact zeros are fine: they come from
// inactive gates and stay exactly zero under the probe shift.
bool grads_clear(const std::vector<std::vector<double>>& analytic) {
  for (const std::vector<double>& block : analytic) {
    for (double v : block) {
      const double a = std::fabs(v);
      if (a != 0.0 && a < kGradMargin) return false;
    }
  }
  return true;
}

CheckResult check_affine(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "affine-" + std::to_string(rep)));
    AffineParams p;
    Matrix x;
    Matrix c;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      p.W = random_matrix(rng, 7, 5);
      p.b.resize(7);
      for (double& v : p.b) v = rng.normal();
      x = random_matrix(rng, 4, 5);
      c = random_matrix(rng, 4, 7);
      Matrix dw(7, 5);
      std::vector<double> db(7, 0.0);
      affine_backward(p, x, c, dw, db);
      analytic.clear();
      analytic.emplace_back(dw.data(), dw.data() + dw.size());
      analytic.push_back(db);
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"W", p.W.data(), p.W.size()},
                                          {"b", p.b.data(), p.b.size()}};
    const auto loss = [&] { return weighted_sum(affine_forward(p, x), c); };
    worst = std::max(worst, grad_check(loss, views, analytic, 1e-5));
  }
  return make_result("grad affine", worst, kSmoothLimit);
}

CheckResult check_relu(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "relu-" + std::to_string(rep)));
    Matrix x;
    Matrix c;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      x = random_off_zero(rng, 5, 6, 0.05);
      c = random_matrix(rng, 5, 6);
      const Matrix dx = relu_backward(x, c);
      analytic.clear();
      analytic.emplace_back(dx.data(), dx.data() + dx.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"x", x.data(), x.size()}};
    const auto loss = [&] { return weighted_sum(relu_forward(x), c); };
    worst = std::max(worst, grad_check(loss, views, analytic, 1e-5));
  }
  return make_result("grad relu", worst, kGatedLimit);
}

CheckResult check_srelu(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "srelu-" + std::to_string(rep)));
    SReluParams p;
    p.wa_diag.resize(6);
    Matrix z;
    Matrix c;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      for (double& v : p.wa_diag) {
        v = 0.5 + rng.uniform();
        if (rng.uniform() < 0.25) v = -v;
      }
      z = random_off_zero(rng, 5, 6, 0.05);
      c = random_matrix(rng, 5, 6);
      std::vector<double> dwa(6, 0.0);
      const Matrix dz = srelu_backward(p, z, c, dwa);
      analytic.clear();
      analytic.push_back(dwa);
      analytic.emplace_back(dz.data(), dz.data() + dz.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"wa", p.wa_diag.data(), p.wa_diag.size()},
                                          {"z", z.data(), z.size()}};
    const auto loss = [&] { return weighted_sum(srelu_forward(p, z), c); };
    worst = std::max(worst, grad_check(loss, views, analytic, 1e-5));
  }
  return make_result("grad srelu", worst, kGatedLimit);
}

CheckResult check_batchnorm(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "batchnorm-" + std::to_string(rep)));
    BatchNormParams p;
    p.gamma.resize(5);
    p.beta.resize(5);
    p.running_mean.assign(5, 0.0);
    p.running_var.assign(5, 1.0);
    for (double& v : p.gamma) v = 1.0 + 0.2 * rng.normal();
    for (double& v : p.beta) v = 0.2 * rng.normal();
    Matrix x;
    Matrix c;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      x = random_matrix(rng, 6, 5);
      c = random_matrix(rng, 6, 5);
      BatchNormCache cache;
      batchnorm_forward_train(p, x, cache, false);
      std::vector<double> dgamma(5, 0.0);
      std::vector<double> dbeta(5, 0.0);
      const Matrix dx = batchnorm_backward(p, cache, c, dgamma, dbeta);
      analytic.clear();
      analytic.push_back(dgamma);
      analytic.push_back(dbeta);
      analytic.emplace_back(dx.data(), dx.data() + dx.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"gamma", p.gamma.data(), p.gamma.size()},
                                          {"beta", p.beta.data(), p.beta.size()},
                                          {"x", x.data(), x.size()}};
    const auto loss = [&] {
      BatchNormCache probe;
      return weighted_sum(batchnorm_forward_train(p, x, probe, false), c);
    };
    worst = std::max(worst, grad_check(loss, views, analytic, 3e-5));
  }
  return make_result("grad batchnorm", worst, kSmoothLimit);
}

CheckResult check_log_softmax(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "log-softmax-" + std::to_string(rep)));
    Matrix x;
    Matrix c;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      x = random_matrix(rng, 5, 7);
      c = random_matrix(rng, 5, 7);
      const Matrix y = log_softmax_forward(x);
      const Matrix dx = log_softmax_backward(y, c);
      analytic.clear();
      analytic.emplace_back(dx.data(), dx.data() + dx.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"x", x.data(), x.size()}};
    const auto loss = [&] { return weighted_sum(log_softmax_forward(x), c); };
    worst = std::max(worst, grad_check(loss, views, analytic, 3e-5));
  }
  return make_result("grad log_softmax", worst, kSmoothLimit);
}

CheckResult check_cross_entropy(std::uint64_t seed, double epsilon, const std::string& name) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, name + "-" + std::to_string(rep)));
    Matrix x;
    Matrix t;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      x = random_matrix(rng, 5, 3);
      t = onehot_rows(rng, 5, 3);
      if (epsilon > 0.0) {
        const SmoothingConfig sc{epsilon, 3};
        for (std::size_t r = 0; r < t.rows(); ++r) {
          const std::vector<double> row(t.row(r), t.row(r) + 3);
          const std::vector<double> smoothed = smooth_labels(row, sc);
          std::copy(smoothed.begin(), smoothed.end(), t.row(r));
        }
      }
      const Matrix y = log_softmax_forward(x);
      const Matrix dlogp = cross_entropy_backward(y, t);
      const Matrix dx = log_softmax_backward(y, dlogp);
      analytic.clear();
      analytic.emplace_back(dx.data(), dx.data() + dx.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"x", x.data(), x.size()}};
    const auto loss = [&] { return cross_entropy(log_softmax_forward(x), t); };
    worst = std::max(worst, grad_check(loss, views, analytic, 3e-5));
  }
  return make_result(name, worst, kSmoothLimit);
}

CheckResult check_mse(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, "mse-" + std::to_string(rep)));
    Matrix out;
    Matrix tar;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      out = random_matrix(rng, 5, 8);
      tar = random_matrix(rng, 5, 8);
      const Matrix dout = mse_backward(out, tar);
      analytic.clear();
      analytic.emplace_back(dout.data(), dout.data() + dout.size());
      if (grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"out", out.data(), out.size()}};
    const auto loss = [&] { return mse_loss(out, tar); };
    worst = std::max(worst, grad_check(loss, views, analytic, 1e-5));
  }
  return make_result("grad mse", worst, kSmoothLimit);
}

double row_norm(const Matrix& m, std::size_t r) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += m(r, j) * m(r, j);
  return std::sqrt(s);
}

CheckResult check_cosine(std::uint64_t seed, CosineDenominator den, const std::string& name) {
  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    Rng rng(derive_seed(seed, name + "-" + std::to_string(rep)));
    Matrix out;
    Matrix tar;
    std::vector<std::vector<double>> analytic;
    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      out = random_matrix(rng, 5, 8);
      tar = random_matrix(rng, 5, 8);
      bool ok = true;
      for (std::size_t r = 0; r < 5; ++r) {
        if (row_norm(out, r) < 0.5 || row_norm(tar, r) < 0.5) ok = false;
        if (den == CosineDenominator::kLiteralMax &&
            std::fabs(row_norm(out, r) - row_norm(tar, r)) < 0.05) {
          ok = false;
        }
      }
      const Matrix dout = cosine_backward(out, tar, den);
      analytic.clear();
      analytic.emplace_back(dout.data(), dout.data() + dout.size());
      if (ok && grads_clear(analytic)) break;
    }
    const std::vector<ParamView> views = {{"out", out.data(), out.size()}};
    const auto loss = [&] { return cosine_loss(out, tar, den); };
    worst = std::max(worst, grad_check(loss, views, analytic, 3e-5));
  }
  return make_result(name, worst, kSmoothLimit);
}

void scale_in_place(Matrix& m, double s) {
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] *= s;
}

struct ModelCase {
  std::string name;
  Variant variant;
  bool use_srelu = false;
  bool hps_projection = false;
  RegLossKind reg_loss = RegLossKind::kCosine;
  double epsilon = 0.0;
};

// The srelu gate fires on wa_j * z; the relu gate on z itself. Both must
// sit clear of zero at the probe point.
bool stack_margins_ok(const std::vector<HiddenLayer>& layers, const StackCache& cache,
                      double margin) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Matrix& z = cache.z[l];
    for (std::size_t r = 0; r < z.rows(); ++r) {
      for (std::size_t j = 0; j < z.cols(); ++j) {
        const double gate =
            layers[l].use_srelu ? layers[l].srelu.wa_diag[j] * z(r, j) : z(r, j);
        if (std::fabs(gate) < margin) return false;
      }
    }
  }
  return true;
}

CheckResult check_model(const ModelCase& mc, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.input_dim = 12;
  cfg.hidden_dims = {8, 8};
  cfg.variant = mc.variant;
  cfg.use_srelu = mc.use_srelu;
  cfg.hps_append_projection = mc.hps_projection;
  if (variant_has_reg(mc.variant)) cfg.reg_target_dim = 10;
  if (variant_has_attr(mc.variant)) cfg.attr_classes = 4;

  const LossWeights weights{0.37, 0.61};
  const SmoothingConfig smoothing{mc.epsilon, 4};
  const std::size_t batch = 5;

  double worst = 0.0;
  for (std::size_t rep = 0; rep < kPoints; ++rep) {
    cfg.seed = derive_seed(seed, mc.name + "-" + std::to_string(rep));
    Model m = build_model(cfg);
    Rng rng(derive_seed(cfg.seed, "selfcheck-data"));
    for (std::vector<HiddenLayer>* stack : {&m.main_hidden, &m.reg_hidden}) {
      for (HiddenLayer& l : *stack) {
        if (l.use_srelu) {
          for (double& v : l.srelu.wa_diag) {
            v = 0.5 + rng.uniform();
            if (rng.uniform() < 0.25) v = -v;
          }
        }
        for (double& v : l.bn.gamma) v = 1.0 + 0.2 * rng.normal();
        for (double& v : l.bn.beta) v = 0.2 * rng.normal();
      }
    }

    const Matrix class_targets = onehot_rows(rng, batch, 3);
    Matrix reg_targets;
    Matrix attr_targets;
    if (m.has_reg()) reg_targets = random_matrix(rng, batch, cfg.reg_target_dim);
    if (m.has_attr()) {
      attr_targets = onehot_rows(rng, batch, cfg.attr_classes);
      if (mc.epsilon > 0.0) {
        for (std::size_t r = 0; r < batch; ++r) {
          const std::vector<double> row(attr_targets.row(r),
                                        attr_targets.row(r) + cfg.attr_classes);
          const std::vector<double> smoothed = smooth_labels(row, smoothing);
          std::copy(smoothed.begin(), smoothed.end(), attr_targets.row(r));
        }
      }
    }

    const double h = 3e-5;
    Matrix input;
    ForwardCache cache;
    ForwardOutput fwd;
    GradBuffers grads = make_grad_buffers(m);
    const std::vector<ParamRef> param_refs = trainable_params(m);
    const std::vector<ParamRef> grad_refs = trainable_grads(grads, m);
    std::vector<std::vector<double>> analytic;

    const auto compute_backward = [&] {
      zero_grads(grads);
      Matrix dlogp = cross_entropy_backward(fwd.log_posteriors, class_targets);
      Matrix dreg;
      Matrix dattr;
      const Matrix* dreg_p = nullptr;
      const Matrix* dattr_p = nullptr;
      if (m.has_reg()) {
        scale_in_place(dlogp, weights.lambda);
        dreg = mc.reg_loss == RegLossKind::kMse
                   ? mse_backward(fwd.reg_prediction, reg_targets)
                   : cosine_backward(fwd.reg_prediction, reg_targets);
        if (m.has_attr()) {
          scale_in_place(dreg, (1.0 - weights.lambda) * (1.0 - weights.gamma));
          dattr = cross_entropy_backward(fwd.attr_log_probs, attr_targets);
          scale_in_place(dattr, (1.0 - weights.lambda) * weights.gamma);
          dattr_p = &dattr;
        } else {
          scale_in_place(dreg, 1.0 - weights.lambda);
        }
        dreg_p = &dreg;
      }
      backward(m, cache, dlogp, dreg_p, dattr_p, grads);
      analytic.clear();
      for (const ParamRef& g : grad_refs) analytic.emplace_back(g.data, g.data + g.size);
    };

    const auto gate_signature = [&](std::vector<char>& sig) {
      ForwardCache probe;
      forward_train(m, input, probe, false);
      sig.clear();
      const auto one_stack = [&](const std::vector<HiddenLayer>& layers, const StackCache& sc) {
        for (std::size_t l = 0; l < layers.size(); ++l) {
          const Matrix& z = sc.z[l];
          for (std::size_t r = 0; r < z.rows(); ++r) {
            for (std::size_t j = 0; j < z.cols(); ++j) {
              const double gate =
                  layers[l].use_srelu ? layers[l].srelu.wa_diag[j] * z(r, j) : z(r, j);
              sig.push_back(gate > 0.0 ? 1 : 0);
            }
          }
        }
      };
      one_stack(m.main_hidden, probe.main);
      if (m.has_own_reg_stack()) one_stack(m.reg_hidden, probe.reg);
    };

    // The margin test above sees only the base point. Batch normalization
    // can amplify a parameter shift on its way to a downstream gate, so the
    // probe offsets themselves are replayed against the gate sign pattern.
    const auto probes_stable = [&] {
      std::vector<char> base_sig;
      std::vector<char> sig;
      gate_signature(base_sig);
      for (const ParamRef& p : param_refs) {
        for (std::size_t k = 0; k < p.size; ++k) {
          const double saved = p.data[k];
          bool flipped = false;
          for (const double off : {h, -h, 2.0 * h, -2.0 * h}) {
            p.data[k] = saved + off;
            gate_signature(sig);
            if (sig != base_sig) {
              flipped = true;
              break;
            }
          }
          p.data[k] = saved;
          if (flipped) return false;
        }
      }
      return true;
    };

    for (int attempt = 0; attempt < kRedraws; ++attempt) {
      input = random_matrix(rng, batch, cfg.input_dim);
      fwd = forward_train(m, input, cache, false);
      if (m.has_reg() && mc.reg_loss == RegLossKind::kMse) {
        // Keep the squared error O(1): probe roundoff scales with the
        // objective value, and far-off targets tell nothing extra about
        // the gradient.
        for (std::size_t r = 0; r < batch; ++r) {
          for (std::size_t j = 0; j < cfg.reg_target_dim; ++j) {
            reg_targets(r, j) = fwd.reg_prediction(r, j) + 0.5 * rng.normal();
          }
        }
      }
      compute_backward();
      bool ok = stack_margins_ok(m.main_hidden, cache.main, 1e-3);
      if (ok && m.has_own_reg_stack()) ok = stack_margins_ok(m.reg_hidden, cache.reg, 1e-3);
      if (ok && m.has_reg() && mc.reg_loss == RegLossKind::kCosine) {
        for (std::size_t r = 0; r < batch; ++r) {
          if (row_norm(fwd.reg_prediction, r) < 1e-2) ok = false;
        }
      }
      if (ok) ok = probes_stable();
      if (ok) break;
    }

    const auto objective = [&](const ForwardOutput& out) {
      const double ce = cross_entropy(out.log_posteriors, class_targets);
      if (!m.has_reg()) return ce;
      const double reg = mc.reg_loss == RegLossKind::kMse
                             ? mse_loss(out.reg_prediction, reg_targets)
                             : cosine_loss(out.reg_prediction, reg_targets);
      if (!m.has_attr()) return total_mt(ce, reg, weights);
      const double attr = cross_entropy(out.attr_log_probs, attr_targets);
      return total_mt_attr(ce, reg, attr, weights);
    };

    std::vector<ParamView> views;
    for (const ParamRef& p : param_refs) views.push_back(ParamView{p.name, p.data, p.size});

    const auto loss = [&] {
      ForwardCache probe;
      return objective(forward_train(m, input, probe, false));
    };
    worst = std::max(worst, grad_check(loss, views, analytic, h));
  }
  return make_result("grad model " + mc.name, worst, kGatedLimit);
}

}  // namespace

std::vector<CheckResult> run_gradient_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_affine(seed));
  out.push_back(check_relu(seed));
  out.push_back(check_srelu(seed));
  out.push_back(check_batchnorm(seed));
  out.push_back(check_log_softmax(seed));
  out.push_back(check_cross_entropy(seed, 0.0, "grad ce"));
  out.push_back(check_cross_entropy(seed, 0.4, "grad ce_smoothed"));
  out.push_back(check_mse(seed));
  out.push_back(check_cosine(seed, CosineDenominator::kProduct, "grad cosine_product"));
  out.push_back(check_cosine(seed, CosineDenominator::kLiteralMax, "grad cosine_literal"));

  const std::vector<ModelCase> cases = {
      {"BASE relu", Variant::kBase, false, false, RegLossKind::kCosine, 0.0},
      {"BASE srelu", Variant::kBase, true, false, RegLossKind::kCosine, 0.0},
      {"SPS relu", Variant::kSps, false, false, RegLossKind::kCosine, 0.0},
      {"SPS srelu", Variant::kSps, true, false, RegLossKind::kCosine, 0.0},
      {"HPS relu", Variant::kHps, false, false, RegLossKind::kMse, 0.0},
      {"HPS srelu", Variant::kHps, true, false, RegLossKind::kMse, 0.0},
      {"HPS-proj relu", Variant::kHps, false, true, RegLossKind::kCosine, 0.0},
      {"HPS-proj srelu", Variant::kHps, true, true, RegLossKind::kCosine, 0.0},
      {"SPS-ATTR relu", Variant::kSpsAttr, false, false, RegLossKind::kCosine, 0.3},
      {"SPS-ATTR srelu", Variant::kSpsAttr, true, false, RegLossKind::kCosine, 0.3},
      {"HPS-ATTR relu", Variant::kHpsAttr, false, false, RegLossKind::kMse, 0.0},
      {"HPS-ATTR srelu", Variant::kHpsAttr, true, false, RegLossKind::kMse, 0.0},
  };
  for (const ModelCase& mc : cases) out.push_back(check_model(mc, seed));
  return out;
}

std::vector<CheckResult> run_eer_checks(std::uint64_t seed, std::size_t instances) {
  double worst_oracle = 0.0;
  double worst_rank = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, "eer-instance-" + std::to_string(i)));
    const std::size_t n_pos = 1 + rng.below(1000);
    const std::size_t n_neg = 1 + rng.below(1000);
    const bool quantize = rng.uniform() < 0.5;
    std::vector<double> pos(n_pos);
    std::vector<double> neg(n_neg);
    for (double& s : pos) s = 1.0 + rng.normal();
    for (double& s : neg) s = rng.normal();
    if (quantize) {
      for (double& s : pos) s = std::round(s * 10.0) / 10.0;
      for (double& s : neg) s = std::round(s * 10.0) / 10.0;
    }
    const EerResult fast = compute_eer(pos, neg);
    const EerResult slow = eer_bruteforce(pos, neg);
    worst_oracle = std::max(worst_oracle, std::fabs(fast.eer - slow.eer));
    worst_oracle = std::max(worst_oracle, std::fabs(fast.threshold - slow.threshold));

    const double a = 0.5 + 2.0 * rng.uniform();
    const double b = 3.0 * rng.normal();
    std::vector<double> pos_t = pos;
    std::vector<double> neg_t = neg;
    for (double& s : pos_t) s = a * s + b;
    for (double& s : neg_t) s = a * s + b;
    const EerResult moved = compute_eer(pos_t, neg_t);
    worst_rank = std::max(worst_rank, std::fabs(moved.eer - fast.eer));
  }
  std::vector<CheckResult> out;
  out.push_back(CheckResult{"eer bruteforce oracle", worst_oracle, 1e-9, worst_oracle <= 1e-9});
  out.push_back(CheckResult{"eer rank invariance", worst_rank, 0.0, worst_rank <= 0.0});
  return out;
}

}  // namespace gsasv::selfcheck
