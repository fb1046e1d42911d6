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

#include "vars/attention.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "vars/errors.hpp"
#include "vars/kernels.hpp"
#include "vars/spectral.hpp"

namespace vars {
namespace {

void validate_tokens(const TokenMatrix& x) {
  if (x.tokens.rows() == 0 || x.tokens.cols() == 0) {
    throw DimensionError("token matrix is empty");
  }
  if (x.grid_h * x.grid_w != x.tokens.rows()) {
    throw DimensionError("token grid extents do not match token count");
  }
}

void add_tokens(const TokenMatrix& x, AttentionOutput& out) {
  const std::size_t total = x.tokens.rows() * x.tokens.cols();
  const double* r = out.reconstruction.data();
  const double* t = x.tokens.data();
  double* o = out.output.data();
  for (std::size_t i = 0; i < total; ++i) o[i] = r[i] + t[i];
}

AttentionOutput solve_channels(Matrix atoms, const TokenMatrix& x,
                               double effective_lambda,
                               const AttentionOptions& opts) {
  validate_tokens(x);
  if (atoms.rows() != x.tokens.rows()) {
    throw DimensionError("atom length does not match token count");
  }
  if (opts.normalize) atoms = normalize_atoms(atoms);
  const double gram_eig = spectral_norm_sq(atoms);

  SolverConfig cfg = opts.solver;
  cfg.lambda = effective_lambda;

  const std::size_t n = x.tokens.rows();
  const std::size_t channels = x.tokens.cols();
  AttentionOutput out;
  out.codes = Matrix(atoms.cols(), channels);
  out.reconstruction = Matrix(n, channels);
  out.output = Matrix(n, channels);
  out.diagnostics.reserve(channels);
  out.effective_lambda = effective_lambda;

  for (std::size_t mu = 0; mu < channels; ++mu) {
    SparseCode sc = ista_solve(atoms, x.tokens.col(mu), cfg, gram_eig);
    out.reconstruction.set_col(mu, matvec(atoms, sc.code));
    out.codes.set_col(mu, sc.code);
    out.diagnostics.push_back(std::move(sc));
  }
  add_tokens(x, out);
  out.saliency = saliency_map(out.reconstruction);
  return out;
}

}  // namespace

AttentionOutput vars_s(const StaticDictionary& dict, const TokenMatrix& x,
                       const AttentionOptions& opts) {
  return solve_channels(dict.atoms, x, opts.solver.lambda, opts);
}

AttentionOutput vars_d(const DynamicDictionary& dict, const TokenMatrix& x,
                       const AttentionOptions& opts) {
  return solve_channels(dict.atoms, x, 2.0 * opts.solver.lambda, opts);
}

AttentionOutput vars_sd(const StaticDictionary& stat,
                        const DynamicDictionary& dyn, const TokenMatrix& x,
                        const AttentionOptions& opts) {
  return solve_channels(combine(stat, dyn), x, opts.solver.lambda, opts);
}

AttentionOutput self_attention_baseline(const DynamicDictionary& dict,
                                        const TokenMatrix& x) {
  validate_tokens(x);
  if (dict.atoms.rows() != x.tokens.rows()) {
    throw DimensionError("feature length does not match token count");
  }
  const std::size_t n = x.tokens.rows();
  const std::size_t channels = x.tokens.cols();

  AttentionOutput out;
  out.codes = Matrix(dict.atoms.cols(), channels);
  out.reconstruction = Matrix(n, channels);
  out.output = Matrix(n, channels);
  for (std::size_t mu = 0; mu < channels; ++mu) {
    const Vector v = matvec_t(dict.atoms, x.tokens.col(mu));
    out.codes.set_col(mu, v);
    out.reconstruction.set_col(mu, matvec(dict.atoms, v));
  }
  add_tokens(x, out);
  out.saliency = saliency_map(out.reconstruction);
  return out;
}

Vector saliency_map(const Matrix& reconstruction) {
  const std::size_t n = reconstruction.rows();
  Vector s(n, 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::sqrt(
        kernels::sum_sq(reconstruction.row_data(i), reconstruction.cols()));
    s[i] = v;
    if (v > peak) peak = v;
  }
  if (peak > 0.0) {
    for (std::size_t i = 0; i < n; ++i) s[i] /= peak;
  }
  return s;
}

VarsGradients vars_backward(const Matrix& atoms, const Matrix& tokens,
                            const Matrix& grad_output, const SolverConfig& cfg,
                            bool zero_init) {
  if (!cfg.steps) {
    throw ArgumentError(
        "vars_backward: a fixed step count is required; a tolerance stop has "
        "no fixed computation graph");
  }
  if (cfg.tol) {
    throw ArgumentError("vars_backward: steps and tol are mutually exclusive");
  }
  if (atoms.rows() == 0 || atoms.cols() == 0) {
    throw DimensionError("vars_backward: empty dictionary");
  }
  if (tokens.rows() != atoms.rows()) {
    throw DimensionError("vars_backward: token length does not match atoms");
  }
  if (grad_output.rows() != tokens.rows() ||
      grad_output.cols() != tokens.cols()) {
    throw DimensionError("vars_backward: grad shape does not match tokens");
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw ArgumentError("vars_backward: lambda must be finite and >= 0");
  }
  if (!(cfg.step_scale > 0.0) || cfg.step_scale > 1.0) {
    throw ArgumentError("vars_backward: step_scale must be in (0, 1]");
  }

  const std::size_t n = atoms.rows();
  const std::size_t m = atoms.cols();
  const std::size_t channels = tokens.cols();
  const long k = *cfg.steps;

  VarsGradients grads;
  grads.grad_tokens = Matrix(n, channels);
  grads.grad_atoms = Matrix(n, m);
  grads.output = Matrix(n, channels);

  const double gram_eig = spectral_norm_sq(atoms);
  if (gram_eig == 0.0) {
    // Zero dictionary: every code stays 0, the operator is the identity on
    // tokens and its sensitivity to the atoms vanishes to first order.
    grads.grad_tokens = grad_output;
    grads.output = tokens;
    return grads;
  }

  const double s = cfg.step_scale / (1.01 * gram_eig);
  const double thr = cfg.lambda * s;
  const Matrix gram = matmul(atoms.transposed(), atoms);

  // Accumulates rank-1 terms g * u^T into grad_atoms.
  auto add_outer = [&](double scale, const Vector& lhs, const Vector& rhs) {
    for (std::size_t i = 0; i < n; ++i) {
      kernels::axpy(scale * lhs[i], rhs.data(), grads.grad_atoms.row_data(i),
                    m);
    }
  };

  std::vector<Vector> us(static_cast<std::size_t>(k) + 1);
  std::vector<Vector> ws(static_cast<std::size_t>(k));
  Vector w(m), next(m);

  for (std::size_t mu = 0; mu < channels; ++mu) {
    const Vector x = tokens.col(mu);
    const Vector b = matvec_t(atoms, x);

    // Forward, mirroring ista_solve update for update so the steps-mode
    // solver and this graph agree to the last bit.
    us[0] = zero_init ? Vector::zeros(m) : b;
    for (long j = 0; j < k; ++j) {
      const Vector gu = matvec(gram, us[static_cast<std::size_t>(j)]);
      for (std::size_t i = 0; i < m; ++i) {
        w[i] = us[static_cast<std::size_t>(j)][i] - s * (gu[i] - b[i]);
      }
      kernels::soft_threshold(w.data(), thr, next.data(), m);
      ws[static_cast<std::size_t>(j)] = w;
      us[static_cast<std::size_t>(j) + 1] = next;
    }

    const Vector& uk = us[static_cast<std::size_t>(k)];
    Vector out_col = matvec(atoms, uk);
    for (std::size_t i = 0; i < n; ++i) out_col[i] += x[i];
    grads.output.set_col(mu, out_col);

    // Output stage: out = atoms * u_k + x.
    const Vector g = grad_output.col(mu);
    Vector gu = matvec_t(atoms, g);
    add_outer(1.0, g, uk);
    Vector gx = g;

    for (long j = k; j >= 1; --j) {
      const Vector& wj = ws[static_cast<std::size_t>(j) - 1];
      const Vector& uprev = us[static_cast<std::size_t>(j) - 1];

      // Shrink gate: passes where the pre-threshold value cleared the
      // threshold, blocks the clamped coordinates (and the kink itself).
      Vector gw(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        if (std::fabs(wj[i]) > thr) gw[i] = gu[i];
      }

      const Vector pgw = matvec(atoms, gw);
      for (std::size_t i = 0; i < n; ++i) gx[i] += s * pgw[i];

      Vector resid = matvec(atoms, uprev);
      for (std::size_t i = 0; i < n; ++i) resid[i] -= x[i];
      add_outer(-s, resid, gw);
      add_outer(-s, pgw, uprev);

      const Vector ggw = matvec(gram, gw);
      for (std::size_t i = 0; i < m; ++i) gu[i] = gw[i] - s * ggw[i];
    }

    if (!zero_init) {
      // Init stage: u_0 = atoms^T x.
      const Vector pg0 = matvec(atoms, gu);
      for (std::size_t i = 0; i < n; ++i) gx[i] += pg0[i];
      add_outer(1.0, x, gu);
    }
    grads.grad_tokens.set_col(mu, gx);
  }
  return grads;
}

}  // namespace vars
