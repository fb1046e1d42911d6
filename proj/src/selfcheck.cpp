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

#include "vars/selfcheck.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "vars/attention.hpp"
#include "vars/dictionary.hpp"
#include "vars/dynamics.hpp"
#include "vars/errors.hpp"
#include "vars/rng.hpp"
#include "vars/solver.hpp"
#include "vars/spectral.hpp"
#include "vars/tensor.hpp"
#include "vars/toy.hpp"

namespace vars {
namespace {

constexpr std::uint64_t kSeed = 0x5e1fc3ec5ULL;

std::string measured(double value, double bound) {
  std::ostringstream os;
  os << "measured " << value << ", bound " << bound;
  return os.str();
}

void check_bound(SuiteReport& rep, const std::string& name, double value,
                 double bound) {
  rep.checks.push_back({name, value <= bound, measured(value, bound)});
}

void check_flag(SuiteReport& rep, const std::string& name, bool ok,
                const std::string& detail) {
  rep.checks.push_back({name, ok, detail});
}

Matrix scaled_to_sigma(Matrix a, double sigma) {
  const double cur = std::sqrt(spectral_norm_sq(a));
  const double f = sigma / cur;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) a.data()[i] *= f;
  return a;
}

SuiteReport check_tensor() {
  SuiteReport rep{"tensor", {}};
  Rng rng(kSeed);
  const Matrix a = gaussian_matrix(7, 5, rng);
  const Matrix b = gaussian_matrix(5, 6, rng);
  const Matrix c = matmul(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      worst = std::max(worst, std::fabs(c(i, j) - acc));
    }
  }
  check_bound(rep, "matmul vs elementwise sums", worst, 1e-12);

  const Vector y = gaussian_vector(7, rng);
  const Vector t1 = matvec_t(a, y);
  const Vector t2 = matvec(a.transposed(), y);
  double tdiff = 0.0;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    tdiff = std::max(tdiff, std::fabs(t1[i] - t2[i]));
  }
  check_bound(rep, "transposed matvec agreement", tdiff, 1e-12);

  const bool shrink_ok = soft_threshold(1.2, 0.5) == 0.7 &&
                         soft_threshold(-0.3, 0.5) == 0.0 &&
                         soft_threshold(-0.9, 0.5) == -0.4 &&
                         soft_threshold(0.5, 0.5) == 0.0;
  check_flag(rep, "soft threshold cases", shrink_ok,
             "shrink, clamp, and boundary values");
  return rep;
}

SuiteReport check_dictionary() {
  SuiteReport rep{"dictionary", {}};
  Rng rng(kSeed);

  const std::size_t h = 5, w = 5;
  const Matrix kernel = gaussian_matrix(3, 3, rng);
  const Matrix image = gaussian_matrix(h, w, rng);
  const StaticDictionary dict = build_static(kernel, h, w);

  Vector flat(h * w, 0.0);
  for (std::size_t i = 0; i < h * w; ++i) flat[i] = image.data()[i];
  const Vector resp = matvec_t(dict.atoms, flat);

  // Zero-padded cross correlation, written out loop by loop.
  double worst = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          const long gr = static_cast<long>(r + i) - 1;
          const long gc = static_cast<long>(c + j) - 1;
          if (gr < 0 || gc < 0 || gr >= static_cast<long>(h) ||
              gc >= static_cast<long>(w)) {
            continue;
          }
          acc += kernel(i, j) * image(static_cast<std::size_t>(gr),
                                      static_cast<std::size_t>(gc));
        }
      }
      worst = std::max(worst, std::fabs(resp[r * w + c] - acc));
    }
  }
  check_bound(rep, "static atoms implement correlation", worst, 1e-12);

  Matrix tokens = gaussian_matrix(6, 4, rng);
  for (std::size_t i = 0; i < tokens.rows() * tokens.cols(); ++i) {
    tokens.data()[i] *= 0.3;
  }
  const Matrix proj = gaussian_matrix(4, 5, rng);
  const DynamicDictionary d1 = build_dynamic(tokens, proj);
  const DynamicDictionary d2 = build_dynamic(tokens, proj);
  bool positive = true;
  for (std::size_t i = 0; i < d1.atoms.rows() * d1.atoms.cols(); ++i) {
    positive = positive && d1.atoms.data()[i] > 0.0;
  }
  const bool bytes_equal =
      std::memcmp(d1.atoms.data(), d2.atoms.data(),
                  d1.atoms.rows() * d1.atoms.cols() * sizeof(double)) == 0;
  check_flag(rep, "dynamic atoms positive and deterministic",
             positive && bytes_equal && d1.source_hash == d2.source_hash,
             "rebuild reproduces atoms and source hash; entries > 0");

  const Matrix normed = normalize_atoms(d1.atoms);
  double norm_err = 0.0;
  for (std::size_t c = 0; c < normed.cols(); ++c) {
    norm_err = std::max(norm_err, std::fabs(norm2(normed.col(c)) - 1.0));
  }
  check_bound(rep, "normalized column lengths", norm_err, 1e-12);
  return rep;
}

SuiteReport check_solver() {
  SuiteReport rep{"solver", {}};
  Rng rng(kSeed);

  SolverConfig exact;
  exact.lambda = 0.3;
  exact.tol = 0.0;  // run to a bitwise fixed point

  const Matrix eye = Matrix::identity(5);
  const Vector x = gaussian_vector(5, rng);
  const SparseCode idc = ista_solve(eye, x, exact);
  double id_err = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    id_err = std::max(id_err,
                      std::fabs(idc.code[i] - soft_threshold(x[i], 0.3)));
  }
  check_bound(rep, "identity dictionary shrinks the signal", id_err, 1e-10);

  const Matrix atoms = normalize_atoms(gaussian_matrix(8, 5, rng));
  const Vector sig = gaussian_vector(8, rng);
  const SparseCode sc = ista_solve(atoms, sig, exact);
  check_bound(rep, "stationarity certificate",
              kkt_residual(atoms, sig, sc.code, exact.lambda), 1e-8);

  double worst_rise = 0.0;
  for (std::size_t i = 1; i < sc.objective_trace.size(); ++i) {
    worst_rise = std::max(worst_rise,
                          sc.objective_trace[i] - sc.objective_trace[i - 1]);
  }
  check_bound(rep, "objective never increases", worst_rise, 1e-12);
  return rep;
}

SuiteReport check_dynamics() {
  SuiteReport rep{"dynamics", {}};
  Rng rng(kSeed);
  IntegratorConfig cfg;
  cfg.equilibrium_tol = 1e-10;
  cfg.t_max = 400.0;

  const Matrix a = scaled_to_sigma(gaussian_matrix(6, 6, rng), 0.5);
  const Vector x = gaussian_vector(6, rng);
  const DynamicsState lin =
      integrate_linear_recurrent(a, x, Vector::zeros(6), cfg);
  Vector az = matvec(a, lin.z);
  double resid = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    resid = std::max(resid, std::fabs(lin.z[i] - az[i] - x[i]));
  }
  check_bound(rep, "linear equilibrium residual", resid, 1e-8);

  const Matrix p = scaled_to_sigma(gaussian_matrix(6, 3, rng), 0.8);
  const Vector xe = gaussian_vector(6, rng);
  const DynamicsState ed = integrate_encoder_decoder(p, xe, cfg);
  const Vector zz = matvec(p, matvec_t(p, ed.z));
  double ed_resid = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    ed_resid = std::max(ed_resid, std::fabs(ed.z[i] - zz[i] - xe[i]));
  }
  check_bound(rep, "encoder-decoder equilibrium residual", ed_resid, 1e-8);

  const Matrix atoms = normalize_atoms(gaussian_matrix(8, 5, rng));
  const Vector sig = gaussian_vector(8, rng);
  IntegratorConfig gated = cfg;
  gated.lambda = 0.3;
  gated.equilibrium_tol = 1e-9;
  gated.log = TrajectoryLog::energy;
  const DynamicsState st = integrate_sparse_dynamics(atoms, sig, gated);
  const Vector code = gate(st.u, gated.lambda);

  SolverConfig exact;
  exact.lambda = 0.3;
  exact.tol = 0.0;
  const SparseCode sc = ista_solve(atoms, sig, exact);
  double code_err = 0.0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    code_err = std::max(code_err, std::fabs(code[i] - sc.code[i]));
  }
  check_bound(rep, "gated equilibrium matches the solver", code_err, 1e-5);

  double rise = 0.0;
  for (std::size_t i = 1; i < st.trajectory.size(); ++i) {
    rise = std::max(rise,
                    st.trajectory[i].energy - st.trajectory[i - 1].energy);
  }
  check_bound(rep, "gated energy never increases", rise, 1e-9);
  return rep;
}

SuiteReport check_attention() {
  SuiteReport rep{"attention", {}};
  Rng rng(kSeed);

  Matrix bar(3, 1, 1.0);
  const StaticDictionary dict = build_static(bar, 4, 4);
  TokenMatrix tm;
  tm.tokens = gaussian_matrix(16, 3, rng);
  tm.grid_h = 4;
  tm.grid_w = 4;

  AttentionOptions opts;
  opts.solver.lambda = 0.2;
  const AttentionOutput out = vars_s(dict, tm, opts);

  bool residual_ok = true;
  for (std::size_t i = 0; i < 16 * 3; ++i) {
    const double expect = out.reconstruction.data()[i] + tm.tokens.data()[i];
    residual_ok = residual_ok &&
                  std::memcmp(&expect, &out.output.data()[i],
                              sizeof(double)) == 0;
  }
  check_flag(rep, "output is reconstruction plus input", residual_ok,
             "elementwise bitwise identity");

  // Above the vanishing sparsity weight every code is 0 and the operator is
  // exactly the identity.
  const Matrix normed = normalize_atoms(dict.atoms);
  double vanish = 0.0;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    vanish = std::max(vanish, vanishing_lambda(normed, tm.tokens.col(mu)));
  }
  AttentionOptions quiet;
  quiet.solver.lambda = 1.05 * vanish;
  quiet.solver.tol = 0.0;
  const AttentionOutput idout = vars_s(dict, tm, quiet);
  bool identity_ok =
      std::memcmp(idout.output.data(), tm.tokens.data(),
                  16 * 3 * sizeof(double)) == 0;
  for (std::size_t i = 0; i < idout.codes.rows() * idout.codes.cols(); ++i) {
    identity_ok = identity_ok && idout.codes.data()[i] == 0.0;
  }
  check_flag(rep, "identity above the vanishing sparsity weight", identity_ok,
             "zero codes, output equals input bitwise");

  Matrix small = tm.tokens;
  for (std::size_t i = 0; i < 16 * 3; ++i) small.data()[i] *= 0.3;
  TokenMatrix tms{small, 4, 4};
  const DynamicDictionary dyn = build_dynamic(small, 5, kSeed);
  const AttentionOutput base = self_attention_baseline(dyn, tms);
  // One explicit-Euler step of dz/dt = r + x - z from z = x at dt = 1,
  // written as (1 - dt) z + dt r + dt x; at dt = 1 this must equal r + x
  // bit for bit.
  bool base_ok = true;
  for (std::size_t i = 0; i < 16 * 3; ++i) {
    const double r = base.reconstruction.data()[i];
    const double t = small.data()[i];
    const double stepped = (0.0 * t + r) + t;
    base_ok = base_ok && std::memcmp(&stepped, &base.output.data()[i],
                                     sizeof(double)) == 0;
  }
  check_flag(rep, "baseline equals its one-step recurrence", base_ok,
             "single Euler step at dt = 1, bitwise");

  double smax = 0.0, smin = 1e300;
  for (std::size_t i = 0; i < out.saliency.size(); ++i) {
    smax = std::max(smax, out.saliency[i]);
    smin = std::min(smin, out.saliency[i]);
  }
  check_flag(rep, "saliency map is max-normalized",
             smin >= 0.0 && smax == 1.0, "entries in [0, 1], peak exactly 1");
  return rep;
}

SuiteReport check_toy() {
  SuiteReport rep{"toy", {}};

  RecurrentSpec contour_spec;
  contour_spec.alpha = 0.5;
  const BarGrid contour = make_contour_scene(5, 5, 1.0);
  const ToyResult cres = simulate_toy(contour, contour_spec);
  const std::vector<bool> mask = column_mask(cres, 5 / 2);
  double col_err = 0.0, bg_err = 0.0;
  for (std::size_t i = 0; i < cres.z.size(); ++i) {
    if (mask[i]) {
      col_err = std::max(col_err, std::fabs(cres.z[i] - 2.0));
    } else {
      bg_err = std::max(bg_err, std::fabs(cres.z[i] - 1.0));
    }
  }
  check_bound(rep, "contour column reaches b/(1-alpha)", col_err, 1e-6);
  check_bound(rep, "isolated bars stay at b", bg_err, 1e-6);

  RecurrentSpec tex_spec;
  tex_spec.alpha = 0.4;
  tex_spec.beta = 0.3;
  tex_spec.mode = CouplingMode::excitation_and_inhibition;
  const BarGrid texture = make_texture_scene(4, 4, 1.0);
  const ToyResult tres = simulate_toy(texture, tex_spec);
  double tex_err = 0.0;
  for (std::size_t i = 0; i < tres.z.size(); ++i) {
    tex_err = std::max(tex_err, std::fabs(tres.z[i] - 1.0 / 0.9));
  }
  check_bound(rep, "texture reaches b/(1-alpha+beta)", tex_err, 1e-6);
  return rep;
}

}  // namespace

bool SuiteReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> selfcheck_suites() {
  return {"tensor", "dictionary", "solver", "dynamics", "attention", "toy"};
}

SuiteReport run_selfcheck(const std::string& suite) {
  if (suite == "tensor") return check_tensor();
  if (suite == "dictionary") return check_dictionary();
  if (suite == "solver") return check_solver();
  if (suite == "dynamics") return check_dynamics();
  if (suite == "attention") return check_attention();
  if (suite == "toy") return check_toy();
  throw ArgumentError("unknown selfcheck suite: " + suite);
}

std::vector<SuiteReport> run_all_selfchecks() {
  std::vector<SuiteReport> reports;
  for (const auto& name : selfcheck_suites()) {
    reports.push_back(run_selfcheck(name));
  }
  return reports;
}

}  // namespace vars
