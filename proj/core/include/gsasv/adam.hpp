// core/include/gsasv/adam.hpp

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

#ifndef GSASV_ADAM_HPP
#define GSASV_ADAM_HPP

#include <cstddef>
#include <vector>

#include "gsasv/grad_check.hpp"
#include "gsasv/model.hpp"

namespace gsasv {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Weight decay enters as a coupled L2 gradient
// term (g += wd * param) before the moment update.
class AdamState {
 public:
  explicit AdamState(const std::vector<ParamRef>& params, const AdamConfig& cfg = {});

  void step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads, double lr,
            double weight_decay);

  std::size_t step_count() const { return t_; }

 private:
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t t_ = 0;
  AdamConfig cfg_;
};

}  // namespace gsasv

#endif  // GSASV_ADAM_HPP
