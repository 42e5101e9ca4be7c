// core/src/losses.cpp

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

#include "gsasv/losses.hpp"

#include <cmath>
#include <string>

#include "gsasv/errors.hpp"

namespace gsasv {

namespace {

constexpr double kCosineEps = 1e-8;

}  // namespace

void validate(const LossWeights& w) {
  if (w.lambda < 0.0 || w.lambda > 1.0) {
    throw DomainError("loss weight lambda must lie in [0, 1], got " + std::to_string(w.lambda));
  }
  if (w.gamma < 0.0 || w.gamma > 1.0) {
    throw DomainError("loss weight gamma must lie in [0, 1], got " + std::to_string(w.gamma));
  }
}

void validate(const SmoothingConfig& cfg) {
  if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0) {
    throw DomainError("smoothing epsilon must lie in [0, 1], got " + std::to_string(cfg.epsilon));
  }
}

double cross_entropy(const Matrix& logp, const Matrix& targets) {
  require_same_shape(logp, targets, "cross_entropy");
  const std::size_t n = logp.rows();
  const std::size_t c = logp.cols();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* lp = logp.row(i);
    const double* y = targets.row(i);
    double example = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      if (y[j] != 0.0) example -= y[j] * lp[j];
    }
    total += example / static_cast<double>(c);
  }
  return total / static_cast<double>(n);
}

Matrix cross_entropy_backward(const Matrix& logp, const Matrix& targets) {
  require_same_shape(logp, targets, "cross_entropy backward");
  const std::size_t n = logp.rows();
  const std::size_t c = logp.cols();
  Matrix dlogp(n, c);
  const double scale = -1.0 / (static_cast<double>(c) * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double* y = targets.row(i);
    double* d = dlogp.row(i);
    for (std::size_t j = 0; j < c; ++j) d[j] = scale * y[j];
  }
  return dlogp;
}

double mse_loss(const Matrix& out, const Matrix& target) {
  require_same_shape(out, target, "mse_loss");
  const double* a = out.data();
  const double* b = target.data();
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(out.rows());
}

Matrix mse_backward(const Matrix& out, const Matrix& target) {
  require_same_shape(out, target, "mse_backward");
  Matrix dout(out.rows(), out.cols());
  const double scale = 2.0 / static_cast<double>(out.rows());
  const double* a = out.data();
  const double* b = target.data();
  double* d = dout.data();
  for (std::size_t i = 0; i < out.size(); ++i) d[i] = scale * (a[i] - b[i]);
  return dout;
}

double cosine_loss(const Matrix& out, const Matrix& target, CosineDenominator den) {
  require_same_shape(out, target, "cosine_loss");
  const std::size_t n = out.rows();
  const std::size_t d = out.cols();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* u = out.row(i);
    const double* v = target.row(i);
    const double nu = norm2(u, d);
    const double nv = norm2(v, d);
    const double denom = den == CosineDenominator::kProduct
                             ? std::max(nu * nv, kCosineEps)
                             : std::max({nu, nv, kCosineEps});
    total += dot(u, v, d) / denom;
  }
  return -total / static_cast<double>(n);
}

Matrix cosine_backward(const Matrix& out, const Matrix& target, CosineDenominator den) {
  require_same_shape(out, target, "cosine_backward");
  const std::size_t n = out.rows();
  const std::size_t d = out.cols();
  Matrix dout(n, d);
  const double scale = -1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* u = out.row(i);
    const double* v = target.row(i);
    double* g = dout.row(i);
    const double nu = norm2(u, d);
    const double nv = norm2(v, d);
    const double dp = dot(u, v, d);
    if (den == CosineDenominator::kProduct) {
      const double prod = nu * nv;
      if (prod > kCosineEps) {
        const double inv = 1.0 / prod;
        const double coef = dp / (nu * nu);
        for (std::size_t j = 0; j < d; ++j) g[j] = scale * inv * (v[j] - coef * u[j]);
      } else {
        // Floor active: the denominator is the constant eps.
        for (std::size_t j = 0; j < d; ++j) g[j] = scale * v[j] / kCosineEps;
      }
    } else {
      if (nu >= nv && nu > kCosineEps) {
        // denom = |u|: d/du [dp / |u|] = v / |u| - dp u / |u|^3
        const double inv = 1.0 / nu;
        const double coef = dp / (nu * nu);
        for (std::size_t j = 0; j < d; ++j) g[j] = scale * inv * (v[j] - coef * u[j]);
      } else {
        const double denom = std::max(nv, kCosineEps);
        for (std::size_t j = 0; j < d; ++j) g[j] = scale * v[j] / denom;
      }
    }
  }
  return dout;
}

std::vector<double> smooth_labels(const std::vector<double>& onehot, const SmoothingConfig& cfg) {
  validate(cfg);
  if (cfg.k != onehot.size()) {
    throw ShapeError("smooth_labels: K=" + std::to_string(cfg.k) + " but the label has " +
                     std::to_string(onehot.size()) + " classes");
  }
  const double uniform = cfg.epsilon / static_cast<double>(cfg.k);
  std::vector<double> q(onehot.size());
  for (std::size_t i = 0; i < onehot.size(); ++i) {
    q[i] = (1.0 - cfg.epsilon) * onehot[i] + uniform;
  }
  return q;
}

double total_mt(double ce, double reg, const LossWeights& w) {
  validate(w);
  return w.lambda * ce + (1.0 - w.lambda) * reg;
}

double total_mt_attr(double ce, double reg, double attr, const LossWeights& w) {
  validate(w);
  return w.lambda * ce + (1.0 - w.lambda) * ((1.0 - w.gamma) * reg + w.gamma * attr);
}

}  // namespace gsasv
