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

#include "vars/spectral.hpp"

#include <cmath>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"

namespace vars {

double spectral_norm_sq(const Matrix& p, double tol, int max_iter,
                        std::uint64_t seed) {
  if (p.rows() == 0 || p.cols() == 0) {
    throw DimensionError("spectral_norm_sq: empty matrix");
  }
  if (!(tol > 0.0)) {
    throw ArgumentError("spectral_norm_sq: tol must be > 0");
  }
  if (max_iter < 1) {
    throw ArgumentError("spectral_norm_sq: max_iter must be >= 1");
  }

  const std::size_t m = p.cols();
  const Matrix g = matmul(p.transposed(), p);
  if (kernels::sum_sq(g.data(), g.size()) == 0.0) return 0.0;

  Rng rng(seed);
  double lambda = 0.0;
  // A start vector can land in the null space of a rank-deficient Gram
  // matrix; re-seeding is cheaper than deflation and loses no generality.
  for (int restart = 0; restart < 4; ++restart) {
    Vector v = gaussian_vector(m, rng);
    const double nv0 = norm2(v);
    if (nv0 == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] /= nv0;

    bool null_space = false;
    for (int it = 0; it < max_iter; ++it) {
      const Vector gv = matvec(g, v);
      const double ngv = norm2(gv);
      if (ngv == 0.0) {
        null_space = true;
        break;
      }
      lambda = dot(v, gv);  // Rayleigh quotient, v is unit
      double rsq = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = gv[i] - lambda * v[i];
        rsq += r * r;
      }
      if (std::sqrt(rsq) <= tol * std::fabs(lambda)) return lambda;
      for (std::size_t i = 0; i < m; ++i) v[i] = gv[i] / ngv;
    }
    if (!null_space) {
      throw ConvergenceError(
          "spectral_norm_sq: power iteration did not converge in " +
              std::to_string(max_iter) + " iterations",
          lambda);
    }
  }
  throw ConvergenceError(
      "spectral_norm_sq: start vectors degenerate after restarts", lambda);
}

}  // namespace vars
