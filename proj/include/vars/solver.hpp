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

#include <optional>
#include <vector>

#include "vars/tensor.hpp"

namespace vars {

// Iterative shrinkage-thresholding for
//   min_u 0.5*||P u - x||^2 + lambda*||u||_1
// with update u <- S_{lambda*s}(u - s*(P^T P u - P^T x)), initialized at
// u = P^T x. The step is s = step_scale / (1.01 * L) where L is the largest
// eigenvalue of P^T P; the 1.01 safety factor absorbs the tolerance of the
// power-iteration estimate so the descent guarantee still holds.
struct SolverConfig {
  double lambda = 0.3;
  // Exactly one mode: `steps` runs a fixed number of updates, `tol` iterates
  // until the successive objective decrease falls below tol or the iterate
  // reaches a bitwise fixed point. tol = 0 ignores the objective (whose
  // floating-point resolution stalls first) and runs the iterate to its
  // terminal state, a bitwise fixed point or last-ulp two-cycle. Setting
  // both throws ArgumentError; setting neither selects tol mode at 1e-10.
  std::optional<int> steps;
  std::optional<double> tol;
  double step_scale = 1.0;  // in (0, 1]
  long max_iter = 500000;   // tol-mode iteration cap
};

struct SparseCode {
  Vector code;
  // Objective at the initial iterate followed by one entry per update;
  // non-increasing for steps within the descent regime.
  std::vector<double> objective_trace;
  long iterations = 0;
  // True when tol mode stopped on its criterion (or any mode hit a bitwise
  // fixed point); false when a fixed step count or max_iter ran out first.
  bool converged = false;
};

SparseCode ista_solve(const Matrix& atoms, const Vector& x,
                      const SolverConfig& cfg);

// Same, with the largest eigenvalue of atoms^T atoms supplied by the caller
// (reused across per-channel solves; treated as a constant).
SparseCode ista_solve(const Matrix& atoms, const Vector& x,
                      const SolverConfig& cfg, double gram_eig_max);

// 0.5*||P code - x||^2 + lambda*||code||_1
double lasso_objective(const Matrix& atoms, const Vector& x,
                       const Vector& code, double lambda);

// Optimality certificate: with r = P^T (P code - x), returns
//   max( max_{i in support} |r_i + lambda*sgn(code_i)|,
//        max_{i off support} max(0, |r_i| - lambda) ).
// Zero exactly at a minimizer.
double kkt_residual(const Matrix& atoms, const Vector& x, const Vector& code,
                    double lambda);

// ||P^T x||_inf: for lambda at or above this value the zero code is optimal.
double vanishing_lambda(const Matrix& atoms, const Vector& x);

}  // namespace vars
