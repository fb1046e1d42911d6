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

#include "vars/dynamics.hpp"

#include <cmath>
#include <string>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"
#include "vars/spectral.hpp"

namespace vars {

namespace {

void validate_config(const IntegratorConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw ArgumentError("integrate: dt must be finite and > 0");
  }
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) {
    throw ArgumentError("integrate: t_max must be finite and > 0");
  }
  if (!(cfg.equilibrium_tol >= 0.0)) {
    throw ArgumentError("integrate: equilibrium_tol must be >= 0");
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw ArgumentError("integrate: lambda must be finite and >= 0");
  }
  if (!(cfg.divergence_norm > 0.0)) {
    throw ArgumentError("integrate: divergence_norm must be > 0");
  }
}

void check_finite_step(double derivative_norm, long step) {
  if (!std::isfinite(derivative_norm)) {
    throw NumericError(
        "integrate: non-finite state derivative at step " +
            std::to_string(step),
        step);
  }
}

}  // namespace

DynamicsState integrate_linear_recurrent(const Matrix& a, const Vector& x,
                                         const Vector& z0,
                                         const IntegratorConfig& cfg) {
  validate_config(cfg);
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError("integrate_linear_recurrent: weights must be square "
                         "and non-empty");
  }
  if (x.size() != a.rows() || z0.size() != a.rows()) {
    throw DimensionError("integrate_linear_recurrent: state size mismatch");
  }

  const std::size_t n = a.rows();
  DynamicsState st;
  st.z = z0;
  st.rho_estimate = std::sqrt(spectral_norm_sq(a, 1e-6, 50000));
  st.stability_warning = st.rho_estimate >= 1.0;

  Vector rhs(n);
  for (long step = 0;; ++step) {
    const Vector az = matvec(a, st.z);
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] = az[i] + x[i] - st.z[i];
    }
    const double dmax = kernels::max_abs(rhs.data(), n);
    check_finite_step(dmax, step);

    if (cfg.log != TrajectoryLog::none) {
      TrajectoryPoint pt;
      pt.t = st.t;
      if (cfg.log == TrajectoryLog::full) pt.z = st.z;
      st.trajectory.push_back(std::move(pt));
    }

    if (dmax < cfg.equilibrium_tol) {
      st.reached_equilibrium = true;
      break;
    }
    if (st.t >= cfg.t_max) break;

    kernels::axpy(cfg.dt, rhs.data(), st.z.data(), n);
    st.t = static_cast<double>(step + 1) * cfg.dt;

    if (kernels::max_abs(st.z.data(), n) > cfg.divergence_norm) {
      throw InstabilityError(
          "integrate_linear_recurrent: state norm exceeded " +
              std::to_string(cfg.divergence_norm) + " at t=" +
              std::to_string(st.t) + " (spectral radius estimate " +
              std::to_string(st.rho_estimate) + ")",
          st.rho_estimate);
    }
  }
  return st;
}

DynamicsState integrate_encoder_decoder(const Matrix& p, const Vector& x,
                                        const IntegratorConfig& cfg) {
  validate_config(cfg);
  if (p.rows() == 0 || p.cols() == 0) {
    throw DimensionError("integrate_encoder_decoder: empty weights");
  }
  if (x.size() != p.rows()) {
    throw DimensionError("integrate_encoder_decoder: input size " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(p.rows()));
  }

  const std::size_t n = p.rows();
  const std::size_t m = p.cols();
  DynamicsState st;
  st.z = Vector::zeros(n);
  st.u = Vector::zeros(m);
  st.rho_estimate = spectral_norm_sq(p, 1e-6, 50000);  // rho(p p^T)
  st.stability_warning = st.rho_estimate >= 1.0;

  Vector zdot(n), udot(m);
  for (long step = 0;; ++step) {
    const Vector pu = matvec(p, st.u);
    const Vector ptz = matvec_t(p, st.z);
    for (std::size_t i = 0; i < n; ++i) {
      zdot[i] = pu[i] + x[i] - st.z[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      udot[i] = ptz[i] - st.u[i];
    }
    const double dmax = std::max(kernels::max_abs(zdot.data(), n),
                                 kernels::max_abs(udot.data(), m));
    check_finite_step(dmax, step);

    if (cfg.log != TrajectoryLog::none) {
      TrajectoryPoint pt;
      pt.t = st.t;
      if (cfg.log == TrajectoryLog::full) {
        pt.z = st.z;
        pt.u = st.u;
      }
      st.trajectory.push_back(std::move(pt));
    }

    if (dmax < cfg.equilibrium_tol) {
      st.reached_equilibrium = true;
      break;
    }
    if (st.t >= cfg.t_max) break;

    kernels::axpy(cfg.dt, zdot.data(), st.z.data(), n);
    kernels::axpy(cfg.dt, udot.data(), st.u.data(), m);
    st.t = static_cast<double>(step + 1) * cfg.dt;

    if (std::max(kernels::max_abs(st.z.data(), n),
                 kernels::max_abs(st.u.data(), m)) > cfg.divergence_norm) {
      throw InstabilityError(
          "integrate_encoder_decoder: state norm exceeded " +
              std::to_string(cfg.divergence_norm) + " at t=" +
              std::to_string(st.t),
          st.rho_estimate);
    }
  }
  return st;
}

DynamicsState integrate_sparse_dynamics(const Matrix& p, const Vector& x,
                                        const IntegratorConfig& cfg) {
  validate_config(cfg);
  if (p.rows() == 0 || p.cols() == 0) {
    throw DimensionError("integrate_sparse_dynamics: empty dictionary");
  }
  if (x.size() != p.rows()) {
    throw DimensionError("integrate_sparse_dynamics: input size " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(p.rows()));
  }
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !(cfg.gamma >= 0.0)) {
    throw ArgumentError(
        "integrate_sparse_dynamics: alpha, beta must be > 0 and gamma >= 0");
  }

  const std::size_t n = p.rows();
  const std::size_t m = p.cols();
  const double theta = 0.5 * cfg.lambda;  // gate threshold

  DynamicsState st;
  st.z = x;  // feed-forward start keeps z - p g(u) - x = 0 at t = 0
  st.u = Vector::zeros(m);

  Vector gu(m), zdot(n), udot(m);
  for (long step = 0;; ++step) {
    kernels::soft_threshold(st.u.data(), theta, gu.data(), m);
    const Vector pg = matvec(p, gu);
    const Vector ptz = matvec_t(p, st.z);
    const Vector ptpg = matvec_t(p, pg);
    for (std::size_t i = 0; i < n; ++i) {
      zdot[i] = pg[i] + x[i] - cfg.alpha * st.z[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      udot[i] =
          -cfg.beta * st.u[i] - cfg.gamma * (ptpg[i] - gu[i]) + ptz[i];
    }
    const double dmax = std::max(kernels::max_abs(zdot.data(), n),
                                 kernels::max_abs(udot.data(), m));
    check_finite_step(dmax, step);

    if (cfg.log != TrajectoryLog::none) {
      TrajectoryPoint pt;
      pt.t = st.t;
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = pg[i] - x[i];
        sq += d * d;
      }
      pt.energy = 0.5 * sq + 2.0 * theta * kernels::abs_sum(gu.data(), m);
      if (cfg.log == TrajectoryLog::full) {
        pt.z = st.z;
        pt.u = st.u;
      }
      st.trajectory.push_back(std::move(pt));
    }

    if (dmax < cfg.equilibrium_tol) {
      st.reached_equilibrium = true;
      break;
    }
    if (st.t >= cfg.t_max) break;

    kernels::axpy(cfg.dt, zdot.data(), st.z.data(), n);
    kernels::axpy(cfg.dt, udot.data(), st.u.data(), m);
    st.t = static_cast<double>(step + 1) * cfg.dt;

    if (std::max(kernels::max_abs(st.z.data(), n),
                 kernels::max_abs(st.u.data(), m)) > cfg.divergence_norm) {
      const double sig = std::sqrt(spectral_norm_sq(p, 1e-6, 50000));
      throw InstabilityError(
          "integrate_sparse_dynamics: state norm exceeded " +
              std::to_string(cfg.divergence_norm) + " at t=" +
              std::to_string(st.t),
          sig);
    }
  }
  return st;
}

Vector gate(const Vector& u, double lambda) {
  if (!(lambda >= 0.0)) {
    throw ArgumentError("gate: lambda must be >= 0");
  }
  return soft_threshold(u, 0.5 * lambda);
}

double energy(const Matrix& p, const Vector& x, const Vector& code,
              double lambda) {
  if (code.size() != p.cols() || x.size() != p.rows()) {
    throw DimensionError("energy: shape mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw ArgumentError("energy: lambda must be >= 0");
  }
  const Vector pc = matvec(p, code);
  double sq = 0.0;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double d = pc[i] - x[i];
    sq += d * d;
  }
  return 0.5 * sq + 2.0 * lambda * norm1(code);
}

}  // namespace vars
