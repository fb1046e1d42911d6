// Copyright 2026 the vars project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "vars/rng.hpp"

namespace vars {

// Throws NumericError when any entry is NaN or infinite. `what` names the
// offending object in the message.
void validate_finite(const double* data, std::size_t n, const char* what);

// Dense double vector. Data-carrying constructors admit only finite values;
// element writes through operator[] are unchecked (hot paths re-validate at
// module boundaries where the contracts require it).
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  explicit Vector(std::vector<double> values);

  static Vector zeros(std::size_t n) { return Vector(n, 0.0); }

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
};

// Dense row-major matrix with the same finiteness contract as Vector.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return d_.size(); }

  double operator()(std::size_t r, std::size_t c) const {
    return d_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return d_[r * cols_ + c];
  }

  double* row_data(std::size_t r) { return d_.data() + r * cols_; }
  const double* row_data(std::size_t r) const { return d_.data() + r * cols_; }
  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  Vector col(std::size_t c) const;
  void set_col(std::size_t c, const Vector& v);
  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> d_;
};

// a (r x k) times b (k x c); dimension mismatch throws DimensionError.
Matrix matmul(const Matrix& a, const Matrix& b);

// a x and a^T x (the transpose product never materializes a^T).
Vector matvec(const Matrix& a, const Vector& x);
Vector matvec_t(const Matrix& a, const Vector& x);

// Column-wise concatenation [a b]; row counts must match.
Matrix hconcat(const Matrix& a, const Matrix& b);

double dot(const Vector& x, const Vector& y);
double norm1(const Vector& x);
double norm2(const Vector& x);
double norm2_sq(const Vector& x);
double norm_inf(const Vector& x);

// sgn(x) * max(|x| - t, 0); t < 0 throws ArgumentError.
double soft_threshold(double x, double t);
Vector soft_threshold(const Vector& x, double t);

Vector gaussian_vector(std::size_t n, Rng& rng);
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace vars
