// tests/test_losses.cpp

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
#include "gsasv/errors.hpp"
#include "gsasv/layers.hpp"
#include "gsasv/losses.hpp"
#include "gsasv/matrix.hpp"

using namespace gsasv;

TEST_SUITE("losses") {
  TEST_CASE("cross entropy of a uniform posterior") {
    Matrix logp(1, 3);
    logp.fill(std::log(1.0 / 3.0));
    Matrix t(1, 3);
    t(0, 1) = 1.0;
    CHECK(cross_entropy(logp, t) == doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-15));
  }

  TEST_CASE("cross entropy averages over the batch") {
    Matrix logp(2, 2);
    logp(0, 0) = std::log(0.5);
    logp(0, 1) = std::log(0.5);
    logp(1, 0) = std::log(0.25);
    logp(1, 1) = std::log(0.75);
    Matrix t(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = 1.0;
    const double expect = 0.5 * (std::log(2.0) / 2.0 - std::log(0.75) / 2.0);
    CHECK(cross_entropy(logp, t) == doctest::Approx(expect).epsilon(1e-14));
  }

  TEST_CASE("cross entropy backward is minus target over C times batch") {
    Matrix logp(2, 3);
    logp.fill(std::log(1.0 / 3.0));
    Matrix t(2, 3);
    t(0, 2) = 1.0;
    t(1, 0) = 1.0;
    const Matrix d = cross_entropy_backward(logp, t);
    CHECK(d(0, 2) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(d(1, 0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 2) == 0.0);
  }

  TEST_CASE("mse divides by the example count only") {
    Matrix out(1, 2);
    out(0, 0) = 1.0;
    out(0, 1) = 1.0;
    Matrix tar(1, 2);
    CHECK(mse_loss(out, tar) == doctest::Approx(2.0).epsilon(1e-15));
    Matrix out2(2, 2);
    out2(0, 0) = 1.0;
    out2(0, 1) = 1.0;
    Matrix tar2(2, 2);
    CHECK(mse_loss(out2, tar2) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("cosine loss of parallel and orthogonal rows") {
    Matrix out(1, 2);
    out(0, 0) = 3.0;
    Matrix tar(1, 2);
    tar(0, 0) = 5.0;
    CHECK(cosine_loss(out, tar) == doctest::Approx(-1.0).epsilon(1e-9));
    Matrix ortho(1, 2);
    ortho(0, 1) = 5.0;
    CHECK(cosine_loss(out, ortho) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("the two cosine denominators differ off the unit sphere") {
    Matrix out(1, 2);
    out(0, 0) = 2.0;
    Matrix tar(1, 2);
    tar(0, 0) = 3.0;
    tar(0, 1) = 4.0;
    CHECK(cosine_loss(out, tar, CosineDenominator::kProduct) ==
          doctest::Approx(-0.6).epsilon(1e-12));
    CHECK(cosine_loss(out, tar, CosineDenominator::kLiteralMax) ==
          doctest::Approx(-1.2).epsilon(1e-12));
  }

  TEST_CASE("label smoothing spot value") {
    const std::vector<double> onehot = {1.0, 0.0, 0.0};
    const SmoothingConfig cfg{0.5, 3};
    const std::vector<double> s = smooth_labels(onehot, cfg);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(s[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }

  TEST_CASE("label smoothing preserves the probability mass") {
    const std::vector<double> onehot = {0.0, 0.0, 0.0, 1.0};
    const SmoothingConfig cfg{0.3, 4};
    const std::vector<double> s = smooth_labels(onehot, cfg);
    double sum = 0.0;
    for (double v : s) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[3] == doctest::Approx(0.7 + 0.3 / 4.0).epsilon(1e-15));
  }

  TEST_CASE("epsilon zero leaves labels untouched") {
    const std::vector<double> onehot = {0.0, 1.0};
    const std::vector<double> s = smooth_labels(onehot, SmoothingConfig{0.0, 2});
    CHECK(s[0] == 0.0);
    CHECK(s[1] == 1.0);
  }

  TEST_CASE("smooth_labels rejects a K mismatch") {
    CHECK_THROWS_AS(smooth_labels({1.0, 0.0}, SmoothingConfig{0.1, 3}), ShapeError);
  }

  TEST_CASE("composite loss spot value") {
    const LossWeights w{0.3, 0.5};
    CHECK(total_mt_attr(1.0, 2.0, 4.0, w) == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(total_mt(1.0, 2.0, w) == doctest::Approx(0.3 + 0.7 * 2.0).epsilon(1e-15));
  }

  TEST_CASE("lambda one reduces the composite to the classifier loss") {
    const LossWeights w{1.0, 0.5};
    CHECK(total_mt(3.25, 99.0, w) == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(total_mt_attr(3.25, 99.0, -7.0, w) == doctest::Approx(3.25).epsilon(1e-15));
  }

  TEST_CASE("weight validation rejects out-of-range values") {
    CHECK_THROWS_AS(validate(LossWeights{-0.1, 0.5}), DomainError);
    CHECK_THROWS_AS(validate(LossWeights{0.5, 1.5}), DomainError);
    CHECK_THROWS_AS(validate(SmoothingConfig{1.5, 3}), DomainError);
    CHECK_NOTHROW(validate(LossWeights{0.0, 1.0}));
  }
}
