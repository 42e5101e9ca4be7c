// core/src/layers.cpp

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

#include "gsasv/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsasv/errors.hpp"

namespace gsasv {

namespace {

void require_cols(const Matrix& x, std::size_t dim, const char* what) {
  if (x.cols() != dim) {
    throw ShapeError(std::string(what) + ": input has " + std::to_string(x.cols()) +
                     " columns, parameters expect " + std::to_string(dim));
  }
}

}  // namespace

Matrix affine_forward(const AffineParams& p, const Matrix& x) {
  require_cols(x, p.in_dim(), "affine");
  const std::size_t batch = x.rows();
  const std::size_t out = p.out_dim();
  const std::size_t in = p.in_dim();
  Matrix y(batch, out);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* xi = x.row(i);
    double* yi = y.row(i);
    for (std::size_t o = 0; o < out; ++o) {
      yi[o] = dot(p.W.row(o), xi, in) + p.b[o];
    }
  }
  return y;
}

Matrix affine_backward(const AffineParams& p, const Matrix& x, const Matrix& dy, Matrix& dW,
                       std::vector<double>& db) {
  require_cols(x, p.in_dim(), "affine backward");
  require_cols(dy, p.out_dim(), "affine backward dy");
  const std::size_t batch = x.rows();
  const std::size_t out = p.out_dim();
  const std::size_t in = p.in_dim();
  Matrix dx(batch, in);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* xi = x.row(i);
    const double* dyi = dy.row(i);
    double* dxi = dx.row(i);
    for (std::size_t o = 0; o < out; ++o) {
      const double g = dyi[o];
      db[o] += g;
      axpy(g, xi, dW.row(o), in);
      axpy(g, p.W.row(o), dxi, in);
    }
  }
  return dx;
}

Matrix relu_forward(const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  const double* px = x.data();
  double* py = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) py[i] = px[i] > 0.0 ? px[i] : 0.0;
  return y;
}

Matrix relu_backward(const Matrix& x, const Matrix& dy) {
  require_same_shape(x, dy, "relu backward");
  Matrix dx(x.rows(), x.cols());
  const double* px = x.data();
  const double* pdy = dy.data();
  double* pdx = dx.data();
  for (std::size_t i = 0; i < x.size(); ++i) pdx[i] = px[i] > 0.0 ? pdy[i] : 0.0;
  return dx;
}

Matrix srelu_forward(const SReluParams& p, const Matrix& z) {
  require_cols(z, p.dim(), "srelu");
  Matrix y(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double* zi = z.row(i);
    double* yi = y.row(i);
    for (std::size_t j = 0; j < z.cols(); ++j) {
      const double s = p.wa_diag[j] * zi[j];
      yi[j] = s > 0.0 ? s : 0.0;
    }
  }
  return y;
}

Matrix srelu_backward(const SReluParams& p, const Matrix& z, const Matrix& dy,
                      std::vector<double>& dwa) {
  require_cols(z, p.dim(), "srelu backward");
  require_same_shape(z, dy, "srelu backward");
  Matrix dz(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double* zi = z.row(i);
    const double* dyi = dy.row(i);
    double* dzi = dz.row(i);
    for (std::size_t j = 0; j < z.cols(); ++j) {
      if (p.wa_diag[j] * zi[j] > 0.0) {
        dwa[j] += dyi[j] * zi[j];
        dzi[j] = dyi[j] * p.wa_diag[j];
      } else {
        dzi[j] = 0.0;
      }
    }
  }
  return dz;
}

Matrix batchnorm_forward_train(BatchNormParams& p, const Matrix& x, BatchNormCache& cache,
                               bool update_running) {
  require_cols(x, p.dim(), "batchnorm");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) {
    throw DataError("batchnorm: train mode requires batch size >= 2, got " + std::to_string(n));
  }
  cache.mean.assign(d, 0.0);
  cache.inv_std.assign(d, 0.0);
  cache.xhat = Matrix(n, d);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    for (std::size_t j = 0; j < d; ++j) cache.mean[j] += xi[j];
  }
  for (std::size_t j = 0; j < d; ++j) cache.mean[j] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = xi[j] - cache.mean[j];
      var[j] += c * c;
    }
  }
  Matrix y(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    const double biased = var[j] / static_cast<double>(n);
    cache.inv_std[j] = 1.0 / std::sqrt(biased + p.epsilon);
    if (update_running) {
      const double unbiased = var[j] / static_cast<double>(n - 1);
      p.running_mean[j] = (1.0 - p.momentum) * p.running_mean[j] + p.momentum * cache.mean[j];
      p.running_var[j] = (1.0 - p.momentum) * p.running_var[j] + p.momentum * unbiased;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    double* hi = cache.xhat.row(i);
    double* yi = y.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      hi[j] = (xi[j] - cache.mean[j]) * cache.inv_std[j];
      yi[j] = p.gamma[j] * hi[j] + p.beta[j];
    }
  }
  return y;
}

Matrix batchnorm_forward_eval(const BatchNormParams& p, const Matrix& x) {
  require_cols(x, p.dim(), "batchnorm");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Matrix y(n, d);
  std::vector<double> inv_std(d);
  for (std::size_t j = 0; j < d; ++j) inv_std[j] = 1.0 / std::sqrt(p.running_var[j] + p.epsilon);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    double* yi = y.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      yi[j] = p.gamma[j] * (xi[j] - p.running_mean[j]) * inv_std[j] + p.beta[j];
    }
  }
  return y;
}

Matrix batchnorm_backward(const BatchNormParams& p, const BatchNormCache& cache, const Matrix& dy,
                          std::vector<double>& dgamma, std::vector<double>& dbeta) {
  require_cols(dy, p.dim(), "batchnorm backward");
  const std::size_t n = dy.rows();
  const std::size_t d = dy.cols();
  std::vector<double> sum_dy(d, 0.0);
  std::vector<double> sum_dy_xhat(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* dyi = dy.row(i);
    const double* hi = cache.xhat.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      sum_dy[j] += dyi[j];
      sum_dy_xhat[j] += dyi[j] * hi[j];
    }
  }
  Matrix dx(n, d);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* dyi = dy.row(i);
    const double* hi = cache.xhat.row(i);
    double* dxi = dx.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      dxi[j] = p.gamma[j] * cache.inv_std[j] *
               (dyi[j] - sum_dy[j] * inv_n - hi[j] * sum_dy_xhat[j] * inv_n);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    dgamma[j] += sum_dy_xhat[j];
    dbeta[j] += sum_dy[j];
  }
  return dx;
}

Matrix log_softmax_forward(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t c = x.cols();
  Matrix y(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    double* yi = y.row(i);
    double m = xi[0];
    for (std::size_t j = 1; j < c; ++j) m = std::max(m, xi[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(xi[j] - m);
    const double log_z = m + std::log(sum);
    for (std::size_t j = 0; j < c; ++j) yi[j] = xi[j] - log_z;
  }
  return y;
}

Matrix log_softmax_backward(const Matrix& y, const Matrix& dy) {
  require_same_shape(y, dy, "log_softmax backward");
  const std::size_t n = y.rows();
  const std::size_t c = y.cols();
  Matrix dx(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    const double* yi = y.row(i);
    const double* dyi = dy.row(i);
    double* dxi = dx.row(i);
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) total += dyi[j];
    for (std::size_t j = 0; j < c; ++j) dxi[j] = dyi[j] - std::exp(yi[j]) * total;
  }
  return dx;
}

}  // namespace gsasv
