// core/include/gsasv/layers.hpp

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

#ifndef GSASV_LAYERS_HPP
#define GSASV_LAYERS_HPP

#include <cstddef>
#include <vector>

#include "gsasv/matrix.hpp"

namespace gsasv {

// The five layer primitives with exact manual forward/backward rules.
// Every backward ACCUMULATES (+=) into the supplied parameter-gradient
// buffers, so branches that share parameters simply call backward twice.

struct AffineParams {
  Matrix W;               // out x in
  std::vector<double> b;  // out

  std::size_t in_dim() const { return W.cols(); }
  std::size_t out_dim() const { return W.rows(); }
};

struct BatchNormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.1;
  double epsilon = 1e-5;

  std::size_t dim() const { return gamma.size(); }
};

// Diagonal of W_a only; the scaling acts before the max and carries no bias.
struct SReluParams {
  std::vector<double> wa_diag;

  std::size_t dim() const { return wa_diag.size(); }
};

Matrix affine_forward(const AffineParams& p, const Matrix& x);
// Returns dx; accumulates into dW (out x in) and db (out).
Matrix affine_backward(const AffineParams& p, const Matrix& x, const Matrix& dy, Matrix& dW,
                       std::vector<double>& db);

Matrix relu_forward(const Matrix& x);
// x is the forward input; gradient passes where x > 0 (subgradient 0 at 0).
Matrix relu_backward(const Matrix& x, const Matrix& dy);

// out = max(W_a z, 0): the diagonal scaling applies before the max.
Matrix srelu_forward(const SReluParams& p, const Matrix& z);
// Returns dz; accumulates into dwa (dim).
Matrix srelu_backward(const SReluParams& p, const Matrix& z, const Matrix& dy,
                      std::vector<double>& dwa);

struct BatchNormCache {
  std::vector<double> mean;
  std::vector<double> inv_std;
  Matrix xhat;
};

// Train mode: per-column batch statistics (biased variance for the
// normalization, unbiased for the running update). Requires batch >= 2.
// update_running=false evaluates the same function without touching the
// running estimates, which keeps finite-difference probes pure.
Matrix batchnorm_forward_train(BatchNormParams& p, const Matrix& x, BatchNormCache& cache,
                               bool update_running = true);
// Eval mode: pure function of the input and the running statistics.
Matrix batchnorm_forward_eval(const BatchNormParams& p, const Matrix& x);
// Returns dx for the train-mode forward; accumulates into dgamma, dbeta.
Matrix batchnorm_backward(const BatchNormParams& p, const BatchNormCache& cache, const Matrix& dy,
                          std::vector<double>& dgamma, std::vector<double>& dbeta);

// Row-wise, computed with max-subtraction.
Matrix log_softmax_forward(const Matrix& x);
// y is the forward output (the log-probabilities).
Matrix log_softmax_backward(const Matrix& y, const Matrix& dy);

}  // namespace gsasv

#endif  // GSASV_LAYERS_HPP
