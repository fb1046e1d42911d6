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

#include "vars/tensor.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"

namespace vars {

void validate_finite(const double* data, std::size_t n, const char* what) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(data[i])) {
      throw NumericError(std::string(what) + ": non-finite entry at index " +
                         std::to_string(i));
    }
  }
}

Vector::Vector(std::size_t n, double fill) : v_(n, fill) {
  validate_finite(&fill, 1, "vector fill value");
}

Vector::Vector(std::vector<double> values) : v_(std::move(values)) {
  validate_finite(v_.data(), v_.size(), "vector");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), d_(rows * cols, fill) {
  validate_finite(&fill, 1, "matrix fill value");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), d_(std::move(values)) {
  if (d_.size() != rows * cols) {
    throw DimensionError("matrix: " + std::to_string(d_.size()) +
                         " values for shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  validate_finite(d_.data(), d_.size(), "matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::col(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = d_[r * cols_ + c];
  return out;
}

void Matrix::set_col(std::size_t c, const Vector& v) {
  for (std::size_t r = 0; r < rows_; ++r) d_[r * cols_ + c] = v[r];
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = d_[r * cols_ + c];
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row_data(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      kernels::axpy(a(i, k), b.row_data(k), ci, b.cols());
    }
  }
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw DimensionError("matvec: matrix cols " + std::to_string(a.cols()) +
                         " vs vector size " + std::to_string(x.size()));
  }
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out[i] = kernels::dot(a.row_data(i), x.data(), a.cols());
  }
  return out;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) {
    throw DimensionError("matvec_t: matrix rows " + std::to_string(a.rows()) +
                         " vs vector size " + std::to_string(x.size()));
  }
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    kernels::axpy(x[i], a.row_data(i), out.data(), a.cols());
  }
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hconcat: row counts " + std::to_string(a.rows()) +
                         " vs " + std::to_string(b.rows()));
  }
  Matrix out(a.rows(), a.cols() + b.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* dst = out.row_data(r);
    const double* ra = a.row_data(r);
    const double* rb = b.row_data(r);
    for (std::size_t c = 0; c < a.cols(); ++c) dst[c] = ra[c];
    for (std::size_t c = 0; c < b.cols(); ++c) dst[a.cols() + c] = rb[c];
  }
  return out;
}

double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("dot: sizes " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  return kernels::dot(x.data(), y.data(), x.size());
}

double norm1(const Vector& x) { return kernels::abs_sum(x.data(), x.size()); }

double norm2(const Vector& x) {
  return std::sqrt(kernels::sum_sq(x.data(), x.size()));
}

double norm2_sq(const Vector& x) {
  return kernels::sum_sq(x.data(), x.size());
}

double norm_inf(const Vector& x) {
  return kernels::max_abs(x.data(), x.size());
}

double soft_threshold(double x, double t) {
  if (!(t >= 0.0)) {
    throw ArgumentError("soft_threshold: threshold must be >= 0");
  }
  return x > t ? x - t : (x < -t ? x + t : 0.0);
}

Vector soft_threshold(const Vector& x, double t) {
  if (!(t >= 0.0)) {
    throw ArgumentError("soft_threshold: threshold must be >= 0");
  }
  Vector out(x.size());
  kernels::soft_threshold(x.data(), t, out.data(), x.size());
  return out;
}

Vector gaussian_vector(std::size_t n, Rng& rng) {
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rng.gaussian();
  return out;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix out(rows, cols, 0.0);
  for (std::size_t i = 0; i < rows * cols; ++i) out.data()[i] = rng.gaussian();
  return out;
}

}  // namespace vars
