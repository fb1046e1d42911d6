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

// Command-line front end. Exit codes: 0 success, 1 failed checks,
// 2 usage errors, 3 file errors, 4 numeric/domain errors. Errors print to
// stderr as "category: message"; results go to stdout only.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vars/attention.hpp"
#include "vars/dictionary.hpp"
#include "vars/dynamics.hpp"
#include "vars/errors.hpp"
#include "vars/fixtures.hpp"
#include "vars/selfcheck.hpp"
#include "vars/solver.hpp"
#include "vars/tensor_io.hpp"
#include "vars/toy.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct GridSpec {
  std::size_t h = 0;
  std::size_t w = 0;
};

GridSpec parse_grid(const std::string& s) {
  unsigned long h = 0, w = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lux%lu%c", &h, &w, &tail) != 2 || h == 0 ||
      w == 0) {
    throw CLI::ValidationError("--grid: expected HxW with positive extents");
  }
  return {h, w};
}

// Shared solver flags; steps and tol are mutually exclusive at the parser.
struct SolveFlags {
  double lambda = 0.3;
  std::optional<long> steps;
  std::optional<double> tol;
  double step_scale = 1.0;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--lambda", f.lambda, "Sparsity weight");
  auto* steps =
      cmd->add_option("--steps", f.steps, "Run exactly this many updates");
  auto* tol = cmd->add_option(
      "--tol", f.tol,
      "Stop when the objective decrease falls below this (0 runs to a "
      "bitwise fixed point)");
  steps->excludes(tol);
  cmd->add_option("--step-scale", f.step_scale,
                  "Fraction of the safe step size, in (0, 1]");
}

vars::SolverConfig to_config(const SolveFlags& f) {
  vars::SolverConfig cfg;
  cfg.lambda = f.lambda;
  if (f.steps) cfg.steps = static_cast<int>(*f.steps);
  if (f.tol) cfg.tol = *f.tol;
  cfg.step_scale = f.step_scale;
  return cfg;
}

int run_checks(const std::string& suite) {
  std::vector<vars::SuiteReport> reports;
  if (suite == "all") {
    reports = vars::run_all_selfchecks();
  } else {
    reports.push_back(vars::run_selfcheck(suite));
  }
  bool ok = true;
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks) {
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << rep.suite << "/"
                << c.name << ": " << c.detail << "\n";
      ok = ok && c.passed;
    }
  }
  std::cout << (ok ? "all checks passed" : "checks FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse reconstruction attention toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Random seed")->envname("VARS_SEED");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Sparse-code one signal");
  std::string solve_atoms, solve_signal, solve_out, solve_trace;
  SolveFlags solve_flags;
  solve->add_option("--atoms", solve_atoms, "Dictionary file")->required();
  solve->add_option("--signal", solve_signal, "Signal file")->required();
  add_solver_flags(solve, solve_flags);
  solve->add_option("--out", solve_out, "Write the code as CSV");
  solve->add_option("--trace", solve_trace, "Write the objective trace");
  solve->callback([&] {
    const vars::Matrix atoms = vars::read_matrix_auto(solve_atoms);
    const vars::Vector signal = vars::read_vector_auto(solve_signal);
    const vars::SparseCode sc =
        vars::ista_solve(atoms, signal, to_config(solve_flags));
    for (std::size_t i = 0; i < sc.code.size(); ++i) {
      std::cout << fmt(sc.code[i]) << "\n";
    }
    if (!solve_out.empty()) vars::write_csv_vector(solve_out, sc.code);
    if (!solve_trace.empty()) {
      vars::write_csv_vector(solve_trace,
                             vars::Vector(sc.objective_trace));
    }
  });

  // ---- ode ----
  auto* ode = app.add_subcommand("ode", "Integrate the recurrent dynamics");
  std::string ode_mode = "sparse";
  std::string ode_matrix, ode_atoms, ode_input, ode_z0;
  std::string ode_out_z, ode_out_code, ode_out_energy;
  vars::IntegratorConfig icfg;
  std::string ode_log = "none";
  ode->add_option("--mode", ode_mode, "linear | encdec | sparse")
      ->check(CLI::IsMember({"linear", "encdec", "sparse"}));
  ode->add_option("--matrix", ode_matrix, "Recurrent matrix (linear mode)");
  ode->add_option("--atoms", ode_atoms, "Dictionary (encdec/sparse modes)");
  ode->add_option("--input", ode_input, "Input vector")->required();
  ode->add_option("--z0", ode_z0, "Initial state (linear mode)");
  ode->add_option("--dt", icfg.dt, "Euler step");
  ode->add_option("--t-max", icfg.t_max, "Time budget");
  ode->add_option("--alpha", icfg.alpha, "Leak rate of z (sparse mode)");
  ode->add_option("--beta", icfg.beta, "Leak rate of u (sparse mode)");
  ode->add_option("--gamma", icfg.gamma, "Lateral coupling (sparse mode)");
  ode->add_option("--lambda", icfg.lambda, "Sparsity weight (sparse mode)");
  ode->add_option("--eq-tol", icfg.equilibrium_tol,
                  "Equilibrium derivative bound");
  ode->add_option("--log", ode_log, "none | energy | full")
      ->check(CLI::IsMember({"none", "energy", "full"}));
  ode->add_option("--out-z", ode_out_z, "Write the final state");
  ode->add_option("--out-code", ode_out_code,
                  "Write the gated code (sparse mode)");
  ode->add_option("--out-energy", ode_out_energy,
                  "Write the energy trace as t,E rows");
  ode->callback([&] {
    icfg.log = ode_log == "none"
                   ? vars::TrajectoryLog::none
                   : (ode_log == "energy" ? vars::TrajectoryLog::energy
                                          : vars::TrajectoryLog::full);
    if (!ode_out_energy.empty() && icfg.log == vars::TrajectoryLog::none) {
      icfg.log = vars::TrajectoryLog::energy;
    }
    const vars::Vector x = vars::read_vector_auto(ode_input);
    vars::DynamicsState st;
    if (ode_mode == "linear") {
      if (ode_matrix.empty()) throw CLI::RequiredError("--matrix");
      const vars::Matrix a = vars::read_matrix_auto(ode_matrix);
      const vars::Vector z0 = ode_z0.empty()
                                  ? vars::Vector::zeros(x.size())
                                  : vars::read_vector_auto(ode_z0);
      st = vars::integrate_linear_recurrent(a, x, z0, icfg);
    } else {
      if (ode_atoms.empty()) throw CLI::RequiredError("--atoms");
      const vars::Matrix atoms = vars::read_matrix_auto(ode_atoms);
      st = ode_mode == "encdec"
               ? vars::integrate_encoder_decoder(atoms, x, icfg)
               : vars::integrate_sparse_dynamics(atoms, x, icfg);
    }
    std::cout << "t " << fmt(st.t) << "\n";
    std::cout << "equilibrium " << (st.reached_equilibrium ? 1 : 0) << "\n";
    std::cout << "rho " << fmt(st.rho_estimate) << "\n";
    std::cout << "stability_warning " << (st.stability_warning ? 1 : 0)
              << "\n";
    std::cout << "z_inf " << fmt(vars::norm_inf(st.z)) << "\n";
    if (!ode_out_z.empty()) vars::write_csv_vector(ode_out_z, st.z);
    if (!ode_out_code.empty()) {
      if (ode_mode != "sparse") throw CLI::RequiredError("--mode sparse");
      vars::write_csv_vector(ode_out_code, vars::gate(st.u, icfg.lambda));
    }
    if (!ode_out_energy.empty()) {
      vars::Matrix trace(st.trajectory.size(), 2);
      for (std::size_t i = 0; i < st.trajectory.size(); ++i) {
        trace(i, 0) = st.trajectory[i].t;
        trace(i, 1) = st.trajectory[i].energy;
      }
      vars::write_csv_matrix(ode_out_energy, trace);
    }
  });

  // ---- vars ----
  auto* vat = app.add_subcommand("vars", "Sparse reconstruction attention");
  std::string vat_variant, vat_input, vat_kernel, vat_proj, vat_grid;
  std::string vat_out, vat_out_recon, vat_out_codes, vat_out_map;
  long vat_rf_dim = 0;
  bool vat_no_normalize = false;
  SolveFlags vat_flags;
  vat->add_option("--variant", vat_variant, "s | d | sd | baseline")
      ->required()
      ->check(CLI::IsMember({"s", "d", "sd", "baseline"}));
  vat->add_option("--input", vat_input, "Token matrix file")->required();
  vat->add_option("--grid", vat_grid, "Token grid as HxW")->required();
  vat->add_option("--kernel", vat_kernel, "Kernel for the static dictionary");
  vat->add_option("--proj", vat_proj, "Projection for the dynamic features");
  vat->add_option("--rf-dim", vat_rf_dim,
                  "Random feature count (seeded projection)");
  add_solver_flags(vat, vat_flags);
  vat->add_flag("--no-normalize", vat_no_normalize,
                "Use dictionary columns as given");
  vat->add_option("--out", vat_out, "Write the output tokens");
  vat->add_option("--out-recon", vat_out_recon, "Write the reconstruction");
  vat->add_option("--out-codes", vat_out_codes, "Write the codes");
  vat->add_option("--out-map", vat_out_map, "Write the saliency map as PGM");
  vat->callback([&] {
    const GridSpec grid = parse_grid(vat_grid);
    vars::TokenMatrix tm;
    tm.tokens = vars::read_matrix_auto(vat_input);
    tm.grid_h = grid.h;
    tm.grid_w = grid.w;

    vars::AttentionOptions opts;
    opts.solver = to_config(vat_flags);
    opts.normalize = !vat_no_normalize;

    const bool wants_static = vat_variant == "s" || vat_variant == "sd";
    const bool wants_dynamic = vat_variant != "s";
    vars::StaticDictionary stat;
    vars::DynamicDictionary dyn;
    if (wants_static) {
      if (vat_kernel.empty()) throw CLI::RequiredError("--kernel");
      stat = vars::build_static(vars::read_matrix_auto(vat_kernel), grid.h,
                                grid.w);
    }
    if (wants_dynamic) {
      if (!vat_proj.empty()) {
        dyn = vars::build_dynamic(tm.tokens,
                                  vars::read_matrix_auto(vat_proj));
      } else if (vat_rf_dim > 0) {
        dyn = vars::build_dynamic(tm.tokens,
                                  static_cast<std::size_t>(vat_rf_dim), seed);
      } else {
        throw CLI::RequiredError("--proj or --rf-dim");
      }
    }

    vars::AttentionOutput out;
    if (vat_variant == "s") {
      out = vars::vars_s(stat, tm, opts);
    } else if (vat_variant == "d") {
      out = vars::vars_d(dyn, tm, opts);
    } else if (vat_variant == "sd") {
      out = vars::vars_sd(stat, dyn, tm, opts);
    } else {
      out = vars::self_attention_baseline(dyn, tm);
    }

    bool converged = true;
    long iterations = 0;
    for (const auto& d : out.diagnostics) {
      converged = converged && d.converged;
      iterations += d.iterations;
    }
    std::cout << "variant " << vat_variant << "\n";
    std::cout << "tokens " << tm.tokens.rows() << "\n";
    std::cout << "channels " << tm.tokens.cols() << "\n";
    std::cout << "effective_lambda " << fmt(out.effective_lambda) << "\n";
    std::cout << "iterations " << iterations << "\n";
    std::cout << "converged " << (converged ? 1 : 0) << "\n";
    if (!vat_out.empty()) vars::write_matrix_auto(vat_out, out.output);
    if (!vat_out_recon.empty()) {
      vars::write_matrix_auto(vat_out_recon, out.reconstruction);
    }
    if (!vat_out_codes.empty()) {
      vars::write_matrix_auto(vat_out_codes, out.codes);
    }
    if (!vat_out_map.empty()) {
      vars::Matrix map(grid.h, grid.w);
      for (std::size_t i = 0; i < out.saliency.size(); ++i) {
        map.data()[i] = out.saliency[i];
      }
      vars::write_pgm(vat_out_map, map);
    }
  });

  // ---- toy ----
  auto* toy = app.add_subcommand("toy", "Oriented-bar saliency model");
  std::string toy_scene, toy_grid = "5x5", toy_boundary = "torus";
  std::string toy_out, toy_out_map;
  vars::RecurrentSpec coupling;
  double toy_b = 1.0, toy_density = 0.4;
  vars::IntegratorConfig toy_cfg = vars::toy_integrator_defaults();
  toy->add_option("--scene", toy_scene, "contour | texture | random")
      ->required()
      ->check(CLI::IsMember({"contour", "texture", "random"}));
  toy->add_option("--grid", toy_grid, "Grid as HxW");
  toy->add_option("--alpha", coupling.alpha, "Collinear excitation strength");
  auto* beta = toy->add_option("--beta", coupling.beta,
                               "Parallel inhibition strength");
  toy->add_option("--b", toy_b, "Drive on every bar");
  toy->add_option("--boundary", toy_boundary, "torus | open")
      ->check(CLI::IsMember({"torus", "open"}));
  toy->add_option("--density", toy_density, "Fill rate of the random scene");
  toy->add_option("--dt", toy_cfg.dt, "Euler step");
  toy->add_option("--t-max", toy_cfg.t_max, "Time budget");
  toy->add_option("--eq-tol", toy_cfg.equilibrium_tol,
                  "Equilibrium derivative bound");
  toy->add_option("--out", toy_out, "Write the response grid as CSV");
  toy->add_option("--out-map", toy_out_map,
                  "Write the response grid as PGM (scaled by its peak)");
  toy->callback([&] {
    const GridSpec grid = parse_grid(toy_grid);
    if (beta->count() > 0) {
      coupling.mode = vars::CouplingMode::excitation_and_inhibition;
    }
    coupling.boundary = toy_boundary == "torus" ? vars::Boundary::torus
                                                : vars::Boundary::open;
    vars::BarGrid scene;
    if (toy_scene == "contour") {
      scene = vars::make_contour_scene(grid.h, grid.w, toy_b);
    } else if (toy_scene == "texture") {
      scene = vars::make_texture_scene(grid.h, grid.w, toy_b);
    } else {
      scene = vars::make_random_scene(grid.h, grid.w, toy_b, toy_density,
                                      seed);
    }
    const vars::ToyResult res = vars::simulate_toy(scene, coupling, toy_cfg);

    double zmin = res.z[0], zmax = res.z[0], zsum = 0.0;
    for (std::size_t i = 0; i < res.z.size(); ++i) {
      zmin = std::min(zmin, res.z[i]);
      zmax = std::max(zmax, res.z[i]);
      zsum += res.z[i];
    }
    std::cout << "units " << res.z.size() << "\n";
    std::cout << "equilibrium " << (res.reached_equilibrium ? 1 : 0) << "\n";
    std::cout << "rho " << fmt(res.rho_estimate) << "\n";
    std::cout << "stability_warning " << (res.stability_warning ? 1 : 0)
              << "\n";
    std::cout << "z_min " << fmt(zmin) << "\n";
    std::cout << "z_mean " << fmt(zsum / static_cast<double>(res.z.size()))
              << "\n";
    std::cout << "z_max " << fmt(zmax) << "\n";
    if (toy_scene == "contour") {
      const std::vector<bool> mask = vars::column_mask(res, grid.w / 2);
      double osum = 0.0, bsum = 0.0;
      std::size_t on = 0, bn = 0;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) {
          osum += res.z[i];
          ++on;
        } else {
          bsum += res.z[i];
          ++bn;
        }
      }
      std::cout << "object_mean " << fmt(osum / static_cast<double>(on))
                << "\n";
      std::cout << "background_mean " << fmt(bsum / static_cast<double>(bn))
                << "\n";
      std::cout << "ratio " << fmt(vars::saliency_ratio(res, mask)) << "\n";
    }
    if (!toy_out.empty()) {
      vars::write_csv_matrix(toy_out, res.response_grid());
    }
    if (!toy_out_map.empty()) {
      vars::Matrix map = res.response_grid();
      if (zmax > 0.0) {
        for (std::size_t i = 0; i < map.rows() * map.cols(); ++i) {
          map.data()[i] /= zmax;
        }
      }
      vars::write_pgm(toy_out_map, map);
    }
  });

  // ---- fixtures ----
  auto* fix = app.add_subcommand("fixtures", "Write the canonical inputs");
  std::string fix_out;
  fix->add_option("--out", fix_out, "Output directory")->required();
  fix->callback([&] {
    const vars::FixtureManifest manifest = vars::write_fixtures(fix_out, seed);
    for (const auto& f : manifest.files) {
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx",
                    static_cast<unsigned long long>(f.hash));
      std::cout << hex << "  " << f.name << "\n";
    }
    std::cout << "seed " << manifest.seed << "\n";
    std::cout << "manifest " << fix_out << "/manifest.json\n";
  });

  // ---- check ----
  auto* chk = app.add_subcommand("check", "Run the built-in check suites");
  std::string chk_suite = "all";
  chk->add_option("--suite", chk_suite,
                  "tensor | dictionary | solver | dynamics | attention | "
                  "toy | all");
  int check_rc = 0;
  chk->callback([&] { check_rc = run_checks(chk_suite); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const vars::IoError& e) {
    std::cerr << e.category() << ": " << e.what() << "\n";
    return 3;
  } catch (const vars::Error& e) {
    std::cerr << e.category() << ": " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 4;
  }
  return check_rc;
}
