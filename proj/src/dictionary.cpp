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

#include "vars/dictionary.hpp"

#include <cmath>
#include <string>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"
#include "vars/tensor_io.hpp"

namespace vars {

StaticDictionary build_static(const Matrix& kernel, std::size_t grid_h,
                              std::size_t grid_w) {
  if (kernel.rows() == 0 || kernel.cols() == 0) {
    throw DimensionError("build_static: empty kernel");
  }
  if (grid_h == 0 || grid_w == 0) {
    throw DimensionError("build_static: empty grid");
  }
  if (kernel.rows() > grid_h || kernel.cols() > grid_w) {
    throw DimensionError("build_static: kernel " +
                         std::to_string(kernel.rows()) + "x" +
                         std::to_string(kernel.cols()) +
                         " exceeds grid " + std::to_string(grid_h) + "x" +
                         std::to_string(grid_w));
  }

  const std::size_t n = grid_h * grid_w;
  const std::size_t ch = (kernel.rows() - 1) / 2;
  const std::size_t cw = (kernel.cols() - 1) / 2;

  StaticDictionary dict;
  dict.atoms = Matrix(n, n, 0.0);
  dict.grid_h = grid_h;
  dict.grid_w = grid_w;
  dict.kernel_h = kernel.rows();
  dict.kernel_w = kernel.cols();

  for (std::size_t r = 0; r < grid_h; ++r) {
    for (std::size_t c = 0; c < grid_w; ++c) {
      const std::size_t atom = r * grid_w + c;
      for (std::size_t i = 0; i < kernel.rows(); ++i) {
        for (std::size_t j = 0; j < kernel.cols(); ++j) {
          const long gr = static_cast<long>(r) + static_cast<long>(i) -
                          static_cast<long>(ch);
          const long gc = static_cast<long>(c) + static_cast<long>(j) -
                          static_cast<long>(cw);
          if (gr < 0 || gc < 0 || gr >= static_cast<long>(grid_h) ||
              gc >= static_cast<long>(grid_w)) {
            continue;  // zero padding
          }
          dict.atoms(static_cast<std::size_t>(gr) * grid_w +
                         static_cast<std::size_t>(gc),
                     atom) = kernel(i, j);
        }
      }
    }
  }
  return dict;
}

DynamicDictionary build_dynamic(const Matrix& tokens,
                                const Matrix& projection) {
  if (tokens.rows() == 0 || tokens.cols() == 0) {
    throw DimensionError("build_dynamic: empty token matrix");
  }
  if (projection.rows() != tokens.cols()) {
    throw DimensionError("build_dynamic: projection rows " +
                         std::to_string(projection.rows()) +
                         " vs token channels " +
                         std::to_string(tokens.cols()));
  }
  if (projection.cols() == 0) {
    throw DimensionError("build_dynamic: projection has no columns");
  }

  const std::size_t n = tokens.rows();
  const std::size_t cprime = projection.cols();
  const Matrix xw = matmul(tokens, projection);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(cprime));

  DynamicDictionary dict;
  dict.atoms = Matrix(n, cprime, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double half_sq =
        0.5 * kernels::sum_sq(tokens.row_data(i), tokens.cols());
    for (std::size_t j = 0; j < cprime; ++j) {
      const double arg = xw(i, j) - half_sq;
      if (arg > 700.0) {
        throw NumericRangeError(
            "build_dynamic: exp argument " + std::to_string(arg) +
            " at token " + std::to_string(i) + ", feature " +
            std::to_string(j) + " would overflow");
      }
      dict.atoms(i, j) = std::exp(arg) * inv_sqrt;
    }
  }
  dict.source_hash =
      fnv1a64(tokens.data(), tokens.size() * sizeof(double));
  return dict;
}

DynamicDictionary build_dynamic(const Matrix& tokens, std::size_t feature_dim,
                                std::uint64_t seed) {
  if (feature_dim == 0) {
    throw DimensionError("build_dynamic: feature_dim must be >= 1");
  }
  Rng rng(seed);
  const Matrix projection = gaussian_matrix(tokens.cols(), feature_dim, rng);
  return build_dynamic(tokens, projection);
}

Matrix combine(const StaticDictionary& s, const DynamicDictionary& d) {
  if (s.atoms.rows() != d.atoms.rows()) {
    throw DimensionError("combine: static atoms have " +
                         std::to_string(s.atoms.rows()) +
                         " rows, dynamic atoms " +
                         std::to_string(d.atoms.rows()));
  }
  return hconcat(s.atoms, d.atoms);
}

Matrix normalize_atoms(const Matrix& atoms) {
  Matrix out = atoms;
  for (std::size_t c = 0; c < atoms.cols(); ++c) {
    double sq = 0.0;
    for (std::size_t r = 0; r < atoms.rows(); ++r) {
      sq += atoms(r, c) * atoms(r, c);
    }
    if (sq == 0.0) {
      throw DegenerateAtomError("normalize_atoms: atom " + std::to_string(c) +
                                " has zero norm");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t r = 0; r < atoms.rows(); ++r) out(r, c) *= inv;
  }
  return out;
}

}  // namespace vars
