// core/include/gsasv/matrix.hpp

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

#ifndef GSASV_MATRIX_HPP
#define GSASV_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace gsasv {

// Dense row-major 2-D array of doubles. All numerical work in this library
// runs in 64-bit precision; file formats narrow to 32 bits where documented.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double v) { data_.assign(data_.size(), v); }
  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

double norm2(const double* a, std::size_t n);

bool all_finite(const Matrix& m);
bool all_finite(const std::vector<double>& v);

// Throws NumericError naming `what` if any entry is non-finite.
void check_finite(const Matrix& m, const char* what);

// Columns of a followed by columns of b, row for row.
Matrix concat_cols(const Matrix& a, const Matrix& b);

// Throws ShapeError naming both shapes unless a and b match exactly.
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace gsasv

#endif  // GSASV_MATRIX_HPP
