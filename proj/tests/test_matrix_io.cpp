// tests/test_matrix_io.cpp

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
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsasv/errors.hpp"
#include "gsasv/io_util.hpp"
#include "gsasv/matrix.hpp"
#include "gsasv/rng.hpp"
#include "test_util.hpp"

using namespace gsasv;
using gsasv_test::TempDir;

TEST_SUITE("matrix") {
  TEST_CASE("construction zero-fills") {
    Matrix m(3, 4);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 4);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.data()[i] == 0.0);
  }

  TEST_CASE("row-major indexing") {
    Matrix m(2, 3);
    m(0, 0) = 1.0;
    m(0, 2) = 2.0;
    m(1, 1) = 3.0;
    CHECK(m.data()[0] == 1.0);
    CHECK(m.data()[2] == 2.0);
    CHECK(m.data()[4] == 3.0);
    CHECK(m.row(1)[1] == 3.0);
  }

  TEST_CASE("dot and axpy") {
    const double a[] = {1.0, 2.0, 3.0};
    const double b[] = {4.0, -5.0, 6.0};
    CHECK(dot(a, b, 3) == doctest::Approx(12.0).epsilon(1e-15));
    double y[] = {1.0, 1.0, 1.0};
    axpy(2.0, a, y, 3);
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 5.0);
    CHECK(y[2] == 7.0);
  }

  TEST_CASE("norm2") {
    const double a[] = {3.0, 4.0};
    CHECK(norm2(a, 2) == doctest::Approx(5.0).epsilon(1e-15));
  }

  TEST_CASE("concat_cols") {
    Matrix a(2, 2);
    Matrix b(2, 1);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 3.0;
    a(1, 1) = 4.0;
    b(0, 0) = 5.0;
    b(1, 0) = 6.0;
    const Matrix c = concat_cols(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 3);
    CHECK(c(0, 2) == 5.0);
    CHECK(c(1, 0) == 3.0);
    CHECK(c(1, 2) == 6.0);
  }

  TEST_CASE("finiteness checks") {
    Matrix m(1, 2);
    CHECK(all_finite(m));
    m(0, 1) = std::nan("");
    CHECK_FALSE(all_finite(m));
    CHECK_THROWS_AS(check_finite(m, "probe"), NumericError);
  }

  TEST_CASE("shape mismatch throws") {
    Matrix a(2, 3);
    Matrix b(3, 2);
    CHECK_THROWS_AS(require_same_shape(a, b, "probe"), ShapeError);
  }
}

TEST_SUITE("rng") {
  TEST_CASE("uniform range and determinism") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) {
      const double u = a.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(u == b.uniform());
    }
  }

  TEST_CASE("seeds separate streams") {
    Rng a(1);
    Rng b(2);
    int same = 0;
    for (int i = 0; i < 100; ++i) {
      if (a.next_u64() == b.next_u64()) ++same;
    }
    CHECK(same == 0);
  }

  TEST_CASE("normal moments") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal();
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
  }

  TEST_CASE("below stays in range and covers it") {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t v = rng.below(7);
      CHECK(v < 7);
      seen.insert(v);
    }
    CHECK(seen.size() == 7);
  }

  TEST_CASE("shuffle is a permutation and is deterministic") {
    std::vector<int> v(20);
    for (int i = 0; i < 20; ++i) v[i] = i;
    std::vector<int> w = v;
    Rng a(5);
    Rng b(5);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    std::set<int> elems(v.begin(), v.end());
    CHECK(elems.size() == 20);
  }

  TEST_CASE("derive_seed depends on base and purpose") {
    CHECK(derive_seed(1, "model") == derive_seed(1, "model"));
    CHECK(derive_seed(1, "model") != derive_seed(2, "model"));
    CHECK(derive_seed(1, "model") != derive_seed(1, "train"));
  }
}

TEST_SUITE("io_util") {
  TEST_CASE("crc32 check value") {
    const std::string msg = "123456789";
    CHECK(crc32(msg) == 0xCBF43926u);
  }

  TEST_CASE("crc32 of empty input") { CHECK(crc32(std::string()) == 0u); }

  TEST_CASE("crc32 is incremental") {
    const std::string msg = "123456789";
    const std::uint32_t head = crc32(msg.data(), 4);
    CHECK(crc32(msg.data() + 4, 5, head) == 0xCBF43926u);
  }

  TEST_CASE("atomic write then read round trip") {
    TempDir dir;
    const std::string path = dir.file("blob.bin");
    const std::string payload("\x00\x01binary\npayload\xff", 17);
    atomic_write_file(path, payload);
    CHECK(read_file(path) == payload);
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  }

  TEST_CASE("atomic write creates parent directories") {
    TempDir dir;
    const std::string path = dir.file("a/b/c.txt");
    atomic_write_file(path, "x");
    CHECK(read_file(path) == "x");
  }

  TEST_CASE("read_file on a missing path throws") {
    TempDir dir;
    CHECK_THROWS_AS(read_file(dir.file("absent")), FormatError);
  }

  TEST_CASE("format_fixed6 formatting") {
    CHECK(format_fixed6(0.0) == "0.000000");
    CHECK(format_fixed6(1.5) == "1.500000");
    CHECK(format_fixed6(-2.25) == "-2.250000");
    CHECK(format_fixed6(0.1234564) == "0.123456");
    CHECK(format_fixed6(0.1234566) == "0.123457");
  }
}
