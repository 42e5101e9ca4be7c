// tests/test_layers.cpp

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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "gsasv/adam.hpp"
#include "gsasv/layers.hpp"
#include "gsasv/matrix.hpp"

using namespace gsasv;

TEST_SUITE("layers") {
  TEST_CASE("affine forward spot value") {
    AffineParams p;
    p.W = Matrix(2, 3);
    p.W(0, 0) = 1.0;
    p.W(0, 1) = 2.0;
    p.W(0, 2) = 3.0;
    p.W(1, 0) = -1.0;
    p.W(1, 1) = 0.5;
    p.W(1, 2) = 0.0;
    p.b = {10.0, -10.0};
    Matrix x(1, 3);
    x(0, 0) = 1.0;
    x(0, 1) = 1.0;
    x(0, 2) = 1.0;
    const Matrix y = affine_forward(p, x);
    CHECK(y.rows() == 1);
    CHECK(y.cols() == 2);
    CHECK(y(0, 0) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(y(0, 1) == doctest::Approx(-10.5).epsilon(1e-15));
  }

  TEST_CASE("relu clamps negatives and keeps positives") {
    Matrix x(1, 4);
    x(0, 0) = -2.0;
    x(0, 1) = 0.0;
    x(0, 2) = 3.5;
    x(0, 3) = -0.1;
    const Matrix y = relu_forward(x);
    CHECK(y(0, 0) == 0.0);
    CHECK(y(0, 1) == 0.0);
    CHECK(y(0, 2) == 3.5);
    CHECK(y(0, 3) == 0.0);
  }

  TEST_CASE("srelu scales before the gate") {
    SReluParams p;
    p.wa_diag = {2.0, 0.5};
    Matrix z(1, 2);
    z(0, 0) = 1.0;
    z(0, 1) = -4.0;
    const Matrix y = srelu_forward(p, z);
    CHECK(y(0, 0) == 2.0);
    CHECK(y(0, 1) == 0.0);
  }

  TEST_CASE("srelu negative scaler opens on negative input") {
    SReluParams p;
    p.wa_diag = {-1.5};
    Matrix z(1, 1);
    z(0, 0) = -2.0;
    const Matrix y = srelu_forward(p, z);
    CHECK(y(0, 0) == 3.0);
  }

  TEST_CASE("batchnorm train normalizes with batch statistics") {
    BatchNormParams p;
    p.gamma = {1.0};
    p.beta = {0.0};
    p.running_mean = {0.0};
    p.running_var = {1.0};
    Matrix x(2, 1);
    x(0, 0) = 0.0;
    x(1, 0) = 2.0;
    BatchNormCache cache;
    const Matrix y = batchnorm_forward_train(p, x, cache, true);
    const double expect = 1.0 / std::sqrt(1.0 + 1e-5);
    CHECK(y(0, 0) == doctest::Approx(-expect).epsilon(1e-12));
    CHECK(y(1, 0) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("batchnorm running update uses the unbiased variance") {
    BatchNormParams p;
    p.gamma = {1.0};
    p.beta = {0.0};
    p.running_mean = {0.0};
    p.running_var = {1.0};
    Matrix x(2, 1);
    x(0, 0) = 0.0;
    x(1, 0) = 2.0;
    BatchNormCache cache;
    batchnorm_forward_train(p, x, cache, true);
    CHECK(p.running_mean[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(p.running_var[0] == doctest::Approx(0.9 * 1.0 + 0.1 * 2.0).epsilon(1e-12));
  }

  TEST_CASE("batchnorm train can leave running statistics untouched") {
    BatchNormParams p;
    p.gamma = {1.0};
    p.beta = {0.0};
    p.running_mean = {0.25};
    p.running_var = {4.0};
    Matrix x(3, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    x(2, 0) = -1.0;
    BatchNormCache cache;
    batchnorm_forward_train(p, x, cache, false);
    CHECK(p.running_mean[0] == 0.25);
    CHECK(p.running_var[0] == 4.0);
  }

  TEST_CASE("batchnorm eval uses the running estimates") {
    BatchNormParams p;
    p.gamma = {2.0};
    p.beta = {1.0};
    p.running_mean = {3.0};
    p.running_var = {4.0};
    Matrix x(1, 1);
    x(0, 0) = 5.0;
    const Matrix y = batchnorm_forward_eval(p, x);
    const double expect = 2.0 * (5.0 - 3.0) / std::sqrt(4.0 + 1e-5) + 1.0;
    CHECK(y(0, 0) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("log_softmax rows exponentiate to a distribution") {
    Matrix x(2, 3);
    x(0, 0) = 1.0;
    x(0, 1) = 2.0;
    x(0, 2) = 3.0;
    x(1, 0) = -50.0;
    x(1, 1) = 0.0;
    x(1, 2) = 50.0;
    const Matrix y = log_softmax_forward(x);
    for (std::size_t r = 0; r < 2; ++r) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 3; ++j) sum += std::exp(y(r, j));
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("log_softmax of equal logits is uniform") {
    Matrix x(1, 2);
    const Matrix y = log_softmax_forward(x);
    CHECK(y(0, 0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(y(0, 1) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  }

  TEST_CASE("log_softmax is shift invariant") {
    Matrix a(1, 3);
    a(0, 0) = 0.3;
    a(0, 1) = -1.2;
    a(0, 2) = 2.0;
    Matrix b = a;
    for (std::size_t j = 0; j < 3; ++j) b(0, j) += 1000.0;
    const Matrix ya = log_softmax_forward(a);
    const Matrix yb = log_softmax_forward(b);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(ya(0, j) == doctest::Approx(yb(0, j)).epsilon(1e-9));
    }
  }

  TEST_CASE("adam first step moves by about lr") {
    std::vector<double> w = {0.0};
    std::vector<double> g = {1.0};
    const std::vector<ParamRef> params = {{"w", ParamGroup::kFc, w.data(), 1}};
    const std::vector<ParamRef> grads = {{"w", ParamGroup::kFc, g.data(), 1}};
    AdamState adam(params);
    adam.step(params, grads, 0.1, 0.0);
    CHECK(adam.step_count() == 1);
    CHECK(w[0] == doctest::Approx(-0.1).epsilon(1e-6));
  }

  TEST_CASE("adam weight decay pulls parameters toward zero") {
    std::vector<double> w = {5.0};
    std::vector<double> g = {0.0};
    const std::vector<ParamRef> params = {{"w", ParamGroup::kFc, w.data(), 1}};
    const std::vector<ParamRef> grads = {{"w", ParamGroup::kFc, g.data(), 1}};
    AdamState adam(params);
    adam.step(params, grads, 0.01, 0.1);
    CHECK(w[0] < 5.0);
    CHECK(w[0] > 4.0);
  }

  TEST_CASE("adam with zero gradient and zero decay is a no-op") {
    std::vector<double> w = {1.25};
    std::vector<double> g = {0.0};
    const std::vector<ParamRef> params = {{"w", ParamGroup::kFc, w.data(), 1}};
    const std::vector<ParamRef> grads = {{"w", ParamGroup::kFc, g.data(), 1}};
    AdamState adam(params);
    adam.step(params, grads, 0.5, 0.0);
    CHECK(w[0] == 1.25);
  }
}
