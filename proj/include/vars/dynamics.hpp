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

#include <vector>

#include "vars/tensor.hpp"

namespace vars {

enum class TrajectoryLog { none, energy, full };

// Explicit-Euler integration settings shared by all three recurrent modes.
// alpha/beta/gamma and lambda only apply to the gated sparse dynamics.
struct IntegratorConfig {
  double dt = 0.01;
  double t_max = 200.0;
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 2.0;
  double lambda = 0.3;
  // Equilibrium is declared when every state derivative has infinity norm
  // below this value.
  double equilibrium_tol = 1e-8;
  // State norms beyond this throw InstabilityError.
  double divergence_norm = 1e12;
  TrajectoryLog log = TrajectoryLog::none;
};

struct TrajectoryPoint {
  double t = 0.0;
  // Lyapunov value for the gated dynamics (see integrate_sparse_dynamics);
  // 0 for the ungated modes.
  double energy = 0.0;
  Vector z;  // populated only under TrajectoryLog::full
  Vector u;
};

struct DynamicsState {
  Vector z;
  Vector u;  // empty for the plain linear mode
  double t = 0.0;
  bool reached_equilibrium = false;
  // sigma_max-based estimate of the recurrent spectral radius, and whether
  // it indicates the linear dynamics have no contracting equilibrium. A
  // warning never aborts integration: drives confined to stable eigenmodes
  // still converge. Only an actual norm blowup raises InstabilityError.
  double rho_estimate = 0.0;
  bool stability_warning = false;
  std::vector<TrajectoryPoint> trajectory;
};

// dz/dt = -z + A z + x from state z0. A must be square and match x.
DynamicsState integrate_linear_recurrent(const Matrix& a, const Vector& x,
                                         const Vector& z0,
                                         const IntegratorConfig& cfg);

// Coupled encoder-decoder form with weights tied to p:
//   dz/dt = -z + p u + x,   du/dt = -u + p^T z
// from z = 0, u = 0. Shares its equilibrium with the linear mode at
// A = p p^T (same steady state, factored weights).
DynamicsState integrate_encoder_decoder(const Matrix& p, const Vector& x,
                                        const IntegratorConfig& cfg);

// Gated sparse dynamics
//   dz/dt = -alpha z + p g(u) + x
//   du/dt = -beta u - gamma (p^T p - I) g(u) + p^T z
// with gate g(u_i) = sgn(u_i) max(|u_i| - lambda/2, 0), from z = x, u = 0.
// At the alpha=1, beta=gamma=2 defaults the equilibrium code g(u*) minimizes
// 0.5*||p c - x||^2 + lambda*||c||_1 and z* = p g(u*) + x. Logged energy is
// the Lyapunov form matched to the gate threshold theta = lambda/2, i.e.
// 0.5*||p g(u) - x||^2 + 2 theta ||g(u)||_1, non-increasing along the flow.
DynamicsState integrate_sparse_dynamics(const Matrix& p, const Vector& x,
                                        const IntegratorConfig& cfg);

// sgn(u_i) * max(|u_i| - lambda/2, 0), the code read out of the membrane
// state u.
Vector gate(const Vector& u, double lambda);

// 0.5*||p code - x||^2 + 2*lambda*||code||_1 (the doubled-penalty
// convention; equals lasso_objective with lambda mapped to 2*lambda).
double energy(const Matrix& p, const Vector& x, const Vector& code,
              double lambda);

}  // namespace vars
