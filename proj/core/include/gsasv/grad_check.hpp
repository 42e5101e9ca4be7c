// core/include/gsasv/grad_check.hpp

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

#ifndef GSASV_GRAD_CHECK_HPP
#define GSASV_GRAD_CHECK_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gsasv {

// A mutable view over a flat block of parameter scalars.
struct ParamView {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
};

// Central finite differences against caller-supplied analytic gradients.
// eval_loss re-evaluates the scalar objective at the current parameter
// values; analytic[i] holds the gradient block matching params[i]. Returns
// the max over all scalars of |analytic - numeric| relative to
// max(|analytic|, |numeric|, 1e-5); the floor keeps entries below the
// resolution of the difference quotient from being judged relatively.
// Throws NumericError if the objective is non-finite at any probe point.
double grad_check(const std::function<double()>& eval_loss, const std::vector<ParamView>& params,
                  const std::vector<std::vector<double>>& analytic, double h);

}  // namespace gsasv

#endif  // GSASV_GRAD_CHECK_HPP
