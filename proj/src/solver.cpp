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

#include "vars/solver.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"
#include "vars/spectral.hpp"

namespace vars {

namespace {

void validate_problem(const Matrix& atoms, const Vector& x,
                      const SolverConfig& cfg) {
  if (atoms.rows() == 0 || atoms.cols() == 0) {
    throw DimensionError("ista_solve: empty dictionary");
  }
  if (x.size() != atoms.rows()) {
    throw DimensionError("ista_solve: signal size " +
                         std::to_string(x.size()) + " vs atom length " +
                         std::to_string(atoms.rows()));
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw ArgumentError("ista_solve: lambda must be finite and >= 0");
  }
  if (cfg.steps && cfg.tol) {
    throw ArgumentError("ista_solve: steps and tol are mutually exclusive");
  }
  if (cfg.steps && *cfg.steps < 0) {
    throw ArgumentError("ista_solve: steps must be >= 0");
  }
  if (cfg.tol && (!(*cfg.tol >= 0.0) || !std::isfinite(*cfg.tol))) {
    throw ArgumentError("ista_solve: tol must be finite and >= 0");
  }
  if (!(cfg.step_scale > 0.0) || cfg.step_scale > 1.0) {
    throw ArgumentError("ista_solve: step_scale must be in (0, 1]");
  }
  if (cfg.max_iter < 1) {
    throw ArgumentError("ista_solve: max_iter must be >= 1");
  }
}

}  // namespace

SparseCode ista_solve(const Matrix& atoms, const Vector& x,
                      const SolverConfig& cfg) {
  validate_problem(atoms, x, cfg);
  return ista_solve(atoms, x, cfg, spectral_norm_sq(atoms));
}

SparseCode ista_solve(const Matrix& atoms, const Vector& x,
                      const SolverConfig& cfg, double gram_eig_max) {
  validate_problem(atoms, x, cfg);
  if (!(gram_eig_max >= 0.0) || !std::isfinite(gram_eig_max)) {
    throw ArgumentError("ista_solve: gram_eig_max must be finite and >= 0");
  }

  const std::size_t m = atoms.cols();
  SparseCode out;

  // An all-zero dictionary reconstructs nothing; the zero code is optimal
  // for every lambda and the step size would be undefined.
  if (gram_eig_max == 0.0) {
    out.code = Vector::zeros(m);
    out.converged = true;
    out.objective_trace = {lasso_objective(atoms, x, out.code, cfg.lambda)};
    return out;
  }

  const double s = cfg.step_scale / (1.01 * gram_eig_max);
  const double thr = cfg.lambda * s;
  const bool steps_mode = cfg.steps.has_value();
  const double tol = cfg.tol ? *cfg.tol : 1e-10;
  const long limit = steps_mode ? *cfg.steps : cfg.max_iter;

  const Matrix gram = matmul(atoms.transposed(), atoms);
  const Vector b = matvec_t(atoms, x);

  Vector u = b;  // correlation initialization
  Vector w(m), next(m);
  Vector before_prev;  // u two updates ago, for terminal cycle detection

  double prev = lasso_objective(atoms, x, u, cfg.lambda);
  if (!std::isfinite(prev)) {
    throw NumericError("ista_solve: non-finite objective at initialization",
                       0);
  }
  out.objective_trace.reserve(static_cast<std::size_t>(
      steps_mode ? limit + 1 : 64));
  out.objective_trace.push_back(prev);

  for (long it = 0; it < limit; ++it) {
    const Vector gu = matvec(gram, u);
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = u[i] - s * (gu[i] - b[i]);
    }
    kernels::soft_threshold(w.data(), thr, next.data(), m);

    const double obj = lasso_objective(atoms, x, next, cfg.lambda);
    if (!std::isfinite(obj)) {
      throw NumericError("ista_solve: non-finite objective at iteration " +
                             std::to_string(it + 1),
                         it + 1);
    }
    out.objective_trace.push_back(obj);

    const bool fixed_point =
        std::memcmp(u.data(), next.data(), m * sizeof(double)) == 0;
    // In the last few ulps the update can settle into a period-two orbit
    // instead of a single point; both mean the iterate has hit the precision
    // floor.
    const bool cycling =
        before_prev.size() == m &&
        std::memcmp(before_prev.data(), next.data(), m * sizeof(double)) == 0;
    before_prev = u;
    u = next;
    ++out.iterations;

    if (fixed_point) {
      // Stationary to the last bit. Steps mode still owes the remaining
      // updates, but they are identity maps; skipping them only shortens the
      // (constant) tail of the trace.
      out.converged = true;
      if (steps_mode) {
        while (out.iterations < limit) {
          out.objective_trace.push_back(obj);
          ++out.iterations;
        }
      }
      break;
    }
    if (!steps_mode) {
      // tol = 0 ignores the objective, whose floating-point resolution
      // stalls well before the iterate does, and runs to the terminal
      // fixed point or two-cycle above.
      if (tol > 0.0 ? prev - obj < tol : cycling) {
        out.converged = true;
        break;
      }
    }
    prev = obj;
  }

  out.code = u;
  return out;
}

double lasso_objective(const Matrix& atoms, const Vector& x,
                       const Vector& code, double lambda) {
  if (code.size() != atoms.cols() || x.size() != atoms.rows()) {
    throw DimensionError("lasso_objective: shape mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw ArgumentError("lasso_objective: lambda must be >= 0");
  }
  const Vector r = matvec(atoms, code);
  double sq = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - x[i];
    sq += d * d;
  }
  return 0.5 * sq + lambda * norm1(code);
}

double kkt_residual(const Matrix& atoms, const Vector& x, const Vector& code,
                    double lambda) {
  if (code.size() != atoms.cols() || x.size() != atoms.rows()) {
    throw DimensionError("kkt_residual: shape mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw ArgumentError("kkt_residual: lambda must be >= 0");
  }
  Vector pc = matvec(atoms, code);
  for (std::size_t i = 0; i < pc.size(); ++i) pc[i] -= x[i];
  const Vector r = matvec_t(atoms, pc);

  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double v;
    if (code[i] > 0.0) {
      v = std::fabs(r[i] + lambda);
    } else if (code[i] < 0.0) {
      v = std::fabs(r[i] - lambda);
    } else {
      v = std::fabs(r[i]) - lambda;
      if (v < 0.0) v = 0.0;
    }
    if (v > worst) worst = v;
  }
  return worst;
}

double vanishing_lambda(const Matrix& atoms, const Vector& x) {
  return norm_inf(matvec_t(atoms, x));
}

}  // namespace vars
