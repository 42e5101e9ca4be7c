// core/src/grad_check.cpp

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

#include "gsasv/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "gsasv/errors.hpp"

namespace gsasv {

double grad_check(const std::function<double()>& eval_loss, const std::vector<ParamView>& params,
                  const std::vector<std::vector<double>>& analytic, double h) {
  if (h <= 0.0) throw DomainError("grad_check: step h must be positive");
  if (params.size() != analytic.size()) {
    throw ShapeError("grad_check: " + std::to_string(params.size()) + " parameter blocks vs " +
                     std::to_string(analytic.size()) + " gradient blocks");
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const ParamView& view = params[p];
    if (view.size != analytic[p].size()) {
      throw ShapeError("grad_check: block '" + view.name + "' has " + std::to_string(view.size) +
                       " scalars but " + std::to_string(analytic[p].size()) + " gradients");
    }
    for (std::size_t k = 0; k < view.size; ++k) {
      const double saved = view.data[k];
      const auto probe = [&](double offset) {
        view.data[k] = saved + offset;
        return eval_loss();
      };
      // Five-point stencil: the O(h^2) truncation of the plain central
      // difference is visible against gradient entries near the floor, the
      // O(h^4) term is not.
      const double f_p1 = probe(h);
      const double f_m1 = probe(-h);
      const double f_p2 = probe(2.0 * h);
      const double f_m2 = probe(-2.0 * h);
      view.data[k] = saved;
      if (!std::isfinite(f_p1) || !std::isfinite(f_m1) || !std::isfinite(f_p2) ||
          !std::isfinite(f_m2)) {
        throw NumericError("grad_check: non-finite objective while probing '" + view.name + "'");
      }
      const double numeric = (8.0 * (f_p1 - f_m1) - (f_p2 - f_m2)) / (12.0 * h);
      const double a = analytic[p][k];
      // The 1e-5 floor marks the resolution of the probe itself: central
      // differences on an O(1) objective carry ~1e-11 absolute noise, so
      // entries below the floor are compared absolutely, not relatively.
      const double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-5});
      worst = std::max(worst, std::fabs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace gsasv
