/* Copyright 2026 The Align Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ALIGN_MATRIX_HPP_
#define ALIGN_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "align/errors.hpp"

namespace align {

// Dense row-major double matrix. Feature blocks are (time x channels),
// parameters are (fan_in x fan_out), row vectors are (1 x n).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return d_.size(); }
  bool empty() const { return d_.empty(); }

  double& operator()(int r, int c) { return d_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return d_[static_cast<size_t>(r) * cols_ + c]; }
  double& operator[](size_t i) { return d_[i]; }
  double operator[](size_t i) const { return d_[i]; }

  std::span<double> row(int r) { return {d_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)}; }
  std::span<const double> row(int r) const {
    return {d_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool all_finite() const {
    for (double v : d_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : d_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> d_;
};

inline void require_shape(const Matrix& m, int rows, int cols, const char* where) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DataError(std::string(where) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace align

#endif  // ALIGN_MATRIX_HPP_
