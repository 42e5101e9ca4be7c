// core/src/adam.cpp

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

#include "gsasv/adam.hpp"

#include <cmath>
#include <string>

#include "gsasv/errors.hpp"

namespace gsasv {

AdamState::AdamState(const std::vector<ParamRef>& params, const AdamConfig& cfg) : cfg_(cfg) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const ParamRef& p : params) {
    m_.emplace_back(p.size, 0.0);
    v_.emplace_back(p.size, 0.0);
  }
}

void AdamState::step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
                     double lr, double weight_decay) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameter blocks, " +
                     std::to_string(grads.size()) + " gradient blocks, state has " +
                     std::to_string(m_.size()));
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t b = 0; b < params.size(); ++b) {
    const ParamRef& p = params[b];
    const ParamRef& g = grads[b];
    if (p.size != g.size || p.size != m_[b].size()) {
      throw ShapeError("adam: block '" + p.name + "' size mismatch");
    }
    double* m = m_[b].data();
    double* v = v_[b].data();
    for (std::size_t k = 0; k < p.size; ++k) {
      const double grad = g.data[k] + weight_decay * p.data[k];
      if (!std::isfinite(grad)) {
        throw NumericError("non-finite gradient in parameter group " +
                           param_group_name(p.group) + " (block '" + p.name + "')");
      }
      m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * grad;
      v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * grad * grad;
      const double m_hat = m[k] / bc1;
      const double v_hat = v[k] / bc2;
      p.data[k] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

}  // namespace gsasv
