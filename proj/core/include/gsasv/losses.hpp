// core/include/gsasv/losses.hpp

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

#ifndef GSASV_LOSSES_HPP
#define GSASV_LOSSES_HPP

#include <cstddef>
#include <vector>

#include "gsasv/matrix.hpp"

namespace gsasv {

struct LossWeights {
  double lambda = 0.5;
  double gamma = 0.5;
};

struct SmoothingConfig {
  double epsilon = 0.0;
  std::size_t k = 0;
};

void validate(const LossWeights& w);
void validate(const SmoothingConfig& cfg);

// Per-example loss -(1/C) sum_i y_i log x_i, averaged over the batch. The
// 1/C factor is kept exactly as defined even though it only rescales the
// surface. Terms with y_i = 0 contribute nothing (0 log 0 := 0).
double cross_entropy(const Matrix& logp, const Matrix& targets);
// d(loss)/d(logp): -y / (C * batch).
Matrix cross_entropy_backward(const Matrix& logp, const Matrix& targets);

// ||out - target||^2 / batch (the divisor is the example count, not the
// element count).
double mse_loss(const Matrix& out, const Matrix& target);
Matrix mse_backward(const Matrix& out, const Matrix& target);

// kProduct uses max(|out| |tar|, eps), the standard cosine with a floor.
// kLiteralMax uses max(|out|, |tar|, eps), the formula exactly as printed
// in the source definition; it is not a normalized cosine and is kept
// selectable for comparison.
enum class CosineDenominator { kProduct, kLiteralMax };

// -mean over examples of DOT(out, tar) / denominator, with eps = 1e-8.
double cosine_loss(const Matrix& out, const Matrix& target,
                   CosineDenominator den = CosineDenominator::kProduct);
// Gradient w.r.t. out only (targets are fixed data).
Matrix cosine_backward(const Matrix& out, const Matrix& target,
                       CosineDenominator den = CosineDenominator::kProduct);

// q'(k) = (1 - eps) q(k) + eps / K.
std::vector<double> smooth_labels(const std::vector<double>& onehot, const SmoothingConfig& cfg);

// lambda ce + (1 - lambda) reg.
double total_mt(double ce, double reg, const LossWeights& w);

// lambda ce + (1 - lambda) ((1 - gamma) reg + gamma attr).
double total_mt_attr(double ce, double reg, double attr, const LossWeights& w);

}  // namespace gsasv

#endif  // GSASV_LOSSES_HPP
