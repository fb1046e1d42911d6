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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "vars/attention.hpp"
#include "vars/errors.hpp"
#include "vars/spectral.hpp"

using vars::AttentionOptions;
using vars::AttentionOutput;
using vars::Matrix;
using vars::TokenMatrix;
using vars::Vector;

namespace {

TokenMatrix make_tokens(std::size_t h, std::size_t w, std::size_t channels,
                        std::uint64_t seed) {
  TokenMatrix tm;
  tm.tokens = gen::random_tokens(h * w, channels, seed);
  tm.grid_h = h;
  tm.grid_w = w;
  return tm;
}

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Largest per-channel correlation peak: penalties above this zero every code.
double correlation_peak(const Matrix& normalized_atoms, const Matrix& tokens) {
  double peak = 0.0;
  for (std::size_t c = 0; c < tokens.cols(); ++c) {
    peak = std::max(peak,
                    vars::vanishing_lambda(normalized_atoms, tokens.col(c)));
  }
  return peak;
}

AttentionOptions exact_opts(double lambda) {
  AttentionOptions opts;
  opts.solver.lambda = lambda;
  opts.solver.tol = 0.0;
  return opts;
}

}  // namespace

TEST_CASE("output is exactly reconstruction plus tokens") {
  const TokenMatrix tm = make_tokens(3, 3, 4, 1);
  const vars::StaticDictionary stat =
      vars::build_static(gen::random_matrix(3, 3, 2), 3, 3);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 5, 3);

  AttentionOptions opts;
  opts.solver.lambda = 0.2;
  const AttentionOutput outs[] = {
      vars::vars_s(stat, tm, opts), vars::vars_d(dyn, tm, opts),
      vars::vars_sd(stat, dyn, tm, opts),
      vars::self_attention_baseline(dyn, tm)};
  for (const AttentionOutput& o : outs) {
    Matrix sum = o.reconstruction;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum.data()[i] += tm.tokens.data()[i];
    }
    CHECK(same_bits(o.output, sum));
    const Vector want_sal = vars::saliency_map(o.reconstruction);
    REQUIRE(o.saliency.size() == want_sal.size());
    CHECK(std::memcmp(o.saliency.data(), want_sal.data(),
                      want_sal.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("delta kernel reduces the operator to per-token shrinkage") {
  const TokenMatrix tm = make_tokens(3, 3, 2, 5);
  const vars::StaticDictionary dict =
      vars::build_static(Matrix(1, 1, 1.0), 3, 3);
  const AttentionOutput out = vars::vars_s(dict, tm, exact_opts(0.3));

  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < 9; ++i) {
      const double x = tm.tokens(i, c);
      const double shrunk =
          x > 0.3 ? x - 0.3 : (x < -0.3 ? x + 0.3 : 0.0);
      CHECK(std::fabs(out.codes(i, c) - shrunk) <= 1e-9);
      CHECK(std::fabs(out.output(i, c) - (x + shrunk)) <= 1e-9);
    }
  }
}

TEST_CASE("penalties above every correlation peak pass tokens through") {
  const TokenMatrix tm = make_tokens(3, 4, 3, 7);
  const vars::StaticDictionary stat =
      vars::build_static(gen::random_matrix(3, 3, 8), 3, 4);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 6, 9);

  SUBCASE("static dictionary") {
    const double peak =
        correlation_peak(vars::normalize_atoms(stat.atoms), tm.tokens);
    const AttentionOutput out = vars::vars_s(stat, tm, exact_opts(1.05 * peak));
    CHECK(same_bits(out.output, tm.tokens));
    for (std::size_t i = 0; i < out.codes.size(); ++i) {
      CHECK(out.codes.data()[i] == 0.0);
    }
  }
  SUBCASE("dynamic dictionary doubles the penalty internally") {
    const double peak =
        correlation_peak(vars::normalize_atoms(dyn.atoms), tm.tokens);
    const AttentionOutput out =
        vars::vars_d(dyn, tm, exact_opts(1.05 * peak / 2.0));
    CHECK(same_bits(out.output, tm.tokens));
  }
  SUBCASE("combined dictionary") {
    const double peak = correlation_peak(
        vars::normalize_atoms(vars::combine(stat, dyn)), tm.tokens);
    const AttentionOutput out =
        vars::vars_sd(stat, dyn, tm, exact_opts(1.05 * peak));
    CHECK(same_bits(out.output, tm.tokens));
  }
}

TEST_CASE("the dynamic operator doubles the sparsity weight") {
  const TokenMatrix tm = make_tokens(2, 2, 2, 11);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 5, 12);
  AttentionOptions opts;
  opts.solver.lambda = 0.17;
  const AttentionOutput out = vars::vars_d(dyn, tm, opts);
  CHECK(out.effective_lambda == 2.0 * 0.17);

  const vars::StaticDictionary stat =
      vars::build_static(Matrix(1, 1, 1.0), 2, 2);
  CHECK(vars::vars_s(stat, tm, opts).effective_lambda == 0.17);
  CHECK(vars::vars_sd(stat, dyn, tm, opts).effective_lambda == 0.17);
}

TEST_CASE("combined codes stack both dictionaries") {
  const TokenMatrix tm = make_tokens(3, 3, 2, 13);
  const vars::StaticDictionary stat =
      vars::build_static(gen::random_matrix(3, 1, 14), 3, 3);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 4, 15);
  const AttentionOutput out = vars::vars_sd(stat, dyn, tm);
  CHECK(out.codes.rows() == 9 + 4);
  CHECK(out.codes.cols() == 2);
  CHECK(out.diagnostics.size() == 2);
}

TEST_CASE("channels are coded independently") {
  const vars::StaticDictionary dict =
      vars::build_static(gen::random_matrix(3, 3, 17), 3, 3);
  TokenMatrix tm = make_tokens(3, 3, 2, 18);
  const AttentionOutput fwd = vars::vars_s(dict, tm, exact_opts(0.2));

  TokenMatrix swapped = tm;
  swapped.tokens.set_col(0, tm.tokens.col(1));
  swapped.tokens.set_col(1, tm.tokens.col(0));
  const AttentionOutput rev = vars::vars_s(dict, swapped, exact_opts(0.2));

  const Vector a0 = fwd.output.col(0), a1 = fwd.output.col(1);
  const Vector b0 = rev.output.col(0), b1 = rev.output.col(1);
  CHECK(std::memcmp(a0.data(), b1.data(), a0.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a1.data(), b0.data(), a1.size() * sizeof(double)) == 0);
}

TEST_CASE("normalization can be disabled") {
  // A uniform kernel of 2 builds atoms 2*I; without normalization the
  // lambda-free code must solve 4 u = 2 x instead of u = x.
  const TokenMatrix tm = make_tokens(2, 2, 1, 19);
  vars::StaticDictionary dict = vars::build_static(Matrix(1, 1, 2.0), 2, 2);
  AttentionOptions opts;
  opts.solver.lambda = 0.0;
  opts.normalize = false;
  const AttentionOutput raw = vars::vars_s(dict, tm, opts);
  opts.normalize = true;
  const AttentionOutput unit = vars::vars_s(dict, tm, opts);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::fabs(raw.codes.data()[i] - 0.5 * tm.tokens.data()[i]) <= 1e-8);
    CHECK(std::fabs(unit.codes.data()[i] - tm.tokens.data()[i]) <= 1e-8);
  }
}

TEST_CASE("baseline is correlate-then-project with no solver") {
  const TokenMatrix tm = make_tokens(2, 3, 3, 21);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 5, 22);
  const AttentionOutput out = vars::self_attention_baseline(dyn, tm);
  CHECK(out.diagnostics.empty());
  CHECK(out.effective_lambda == 0.0);

  for (std::size_t c = 0; c < 3; ++c) {
    const Vector x = tm.tokens.col(c);
    const Vector v = vars::matvec_t(dyn.atoms, x);
    const Vector r = vars::matvec(dyn.atoms, v);
    const Vector oc = out.codes.col(c);
    const Vector orc = out.reconstruction.col(c);
    CHECK(std::memcmp(oc.data(), v.data(), v.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(orc.data(), r.data(), r.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("baseline equals one relaxation step from rest, bit for bit") {
  // Starting the recurrent update at z = 0 and taking a single unit step
  // produces 0*t + r followed by + t; both zero signs wash out against
  // nonzero tokens, so the match is exact.
  for (std::uint64_t seed : {23u, 24u, 25u, 26u, 27u}) {
    const TokenMatrix tm = make_tokens(2, 3, 3, seed);
    const vars::DynamicDictionary dyn =
        vars::build_dynamic(tm.tokens, 5, seed + 100);
    const AttentionOutput out = vars::self_attention_baseline(dyn, tm);
    for (std::size_t c = 0; c < 3; ++c) {
      const Vector x = tm.tokens.col(c);
      const Vector r =
          vars::matvec(dyn.atoms, vars::matvec_t(dyn.atoms, x));
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double euler = (0.0 * x[i] + r[i]) + x[i];
        CHECK(out.output(i, c) == euler);
      }
    }
  }
}

TEST_CASE("penalty-free dynamic coding is a least squares projection") {
  const TokenMatrix tm = make_tokens(2, 4, 3, 29);
  const vars::DynamicDictionary dyn = vars::build_dynamic(tm.tokens, 4, 30);
  const Matrix phi = vars::normalize_atoms(dyn.atoms);

  const AttentionOutput out = vars::vars_d(dyn, tm, exact_opts(0.0));
  for (std::size_t c = 0; c < 3; ++c) {
    const Vector x = tm.tokens.col(c);
    const Vector ls = oracle::least_squares(phi, x);
    const Vector recon = vars::matvec(phi, ls);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(std::fabs(out.reconstruction(i, c) - recon[i]) <= 1e-5);
    }
    const double f_got =
        vars::lasso_objective(phi, x, out.codes.col(c), 0.0);
    const double f_ls = vars::lasso_objective(phi, x, ls, 0.0);
    CHECK(f_got <= f_ls + 1e-10);
    CHECK(f_got >= f_ls - 1e-10);
  }
}

TEST_CASE("saliency marks reconstruction energy, peak at one") {
  Matrix r(3, 2, 0.0);
  r(1, 0) = 2.5;
  const Vector one_hot = vars::saliency_map(r);
  CHECK(one_hot[0] == 0.0);
  CHECK(one_hot[1] == 1.0);
  CHECK(one_hot[2] == 0.0);

  const Vector dark = vars::saliency_map(Matrix(4, 3, 0.0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(dark[i] == 0.0);

  const Matrix dense = gen::random_matrix(5, 3, 31);
  const Vector s = vars::saliency_map(dense);
  double peak = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s[i] >= 0.0);
    peak = std::max(peak, s[i]);
  }
  CHECK(peak == 1.0);
}

TEST_CASE("token grids must be consistent") {
  TokenMatrix bad = make_tokens(2, 2, 2, 33);
  bad.grid_w = 3;  // 4 rows cannot tile a 2x3 grid
  const vars::StaticDictionary dict =
      vars::build_static(Matrix(1, 1, 1.0), 2, 2);
  CHECK_THROWS_AS(vars::vars_s(dict, bad), vars::DimensionError);

  TokenMatrix empty;
  empty.grid_h = 2;
  empty.grid_w = 2;
  CHECK_THROWS_AS(vars::vars_s(dict, empty), vars::DimensionError);

  // Dictionary built for a different grid size.
  const vars::StaticDictionary wrong =
      vars::build_static(Matrix(1, 1, 1.0), 3, 3);
  const TokenMatrix ok = make_tokens(2, 2, 2, 34);
  CHECK_THROWS_AS(vars::vars_s(wrong, ok), vars::DimensionError);
}

TEST_CASE("unrolled gradients require a fixed step count") {
  const Matrix atoms = gen::random_atoms(4, 3, 35);
  const Matrix tokens = gen::random_tokens(4, 2, 36);
  const Matrix g = gen::random_matrix(4, 2, 37);

  vars::SolverConfig cfg;  // neither steps nor tol pinned
  CHECK_THROWS_AS(vars::vars_backward(atoms, tokens, g, cfg),
                  vars::ArgumentError);
  cfg.tol = 1e-10;
  CHECK_THROWS_AS(vars::vars_backward(atoms, tokens, g, cfg),
                  vars::ArgumentError);

  cfg = vars::SolverConfig{};
  cfg.steps = 2;
  CHECK_THROWS_AS(
      vars::vars_backward(atoms, gen::random_tokens(5, 2, 38), g, cfg),
      vars::DimensionError);
  CHECK_THROWS_AS(
      vars::vars_backward(atoms, tokens, gen::random_matrix(4, 3, 39), cfg),
      vars::DimensionError);
}

TEST_CASE("zero steps from a zero code is the identity operator") {
  const Matrix atoms = gen::random_atoms(5, 4, 41);
  const Matrix tokens = gen::random_tokens(5, 3, 42);
  const Matrix g = gen::random_matrix(5, 3, 43);
  vars::SolverConfig cfg;
  cfg.steps = 0;
  const vars::VarsGradients grads =
      vars::vars_backward(atoms, tokens, g, cfg, /*zero_init=*/true);
  CHECK(same_bits(grads.output, tokens));
  CHECK(same_bits(grads.grad_tokens, g));
  for (std::size_t i = 0; i < grads.grad_atoms.size(); ++i) {
    CHECK(grads.grad_atoms.data()[i] == 0.0);
  }
}

TEST_CASE("an all-zero dictionary backpropagates as the identity") {
  const Matrix atoms(4, 3, 0.0);
  const Matrix tokens = gen::random_tokens(4, 2, 44);
  const Matrix g = gen::random_matrix(4, 2, 45);
  vars::SolverConfig cfg;
  cfg.steps = 3;
  const vars::VarsGradients grads = vars::vars_backward(atoms, tokens, g, cfg);
  CHECK(same_bits(grads.output, tokens));
  CHECK(same_bits(grads.grad_tokens, g));
  for (std::size_t i = 0; i < grads.grad_atoms.size(); ++i) {
    CHECK(grads.grad_atoms.data()[i] == 0.0);
  }
}

TEST_CASE("unrolled forward agrees with the solver bit for bit") {
  const Matrix atoms = gen::random_atoms(6, 4, 47);
  const Matrix tokens = gen::random_tokens(6, 3, 48);
  const Matrix g = gen::random_matrix(6, 3, 49);
  vars::SolverConfig cfg;
  cfg.lambda = 0.2;
  cfg.steps = 5;
  const vars::VarsGradients grads = vars::vars_backward(atoms, tokens, g, cfg);

  Matrix expect(6, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const Vector x = tokens.col(c);
    const vars::SparseCode sc = vars::ista_solve(atoms, x, cfg);
    Vector out = vars::matvec(atoms, sc.code);
    for (std::size_t i = 0; i < 6; ++i) out[i] += x[i];
    expect.set_col(c, out);
  }
  CHECK(same_bits(grads.output, expect));
}

TEST_CASE("identity atoms with no penalty double the incoming gradient") {
  const Matrix eye = Matrix::identity(4);
  const Matrix tokens = gen::random_tokens(4, 2, 51);
  const Matrix g = gen::random_matrix(4, 2, 52);
  vars::SolverConfig cfg;
  cfg.lambda = 0.0;
  cfg.steps = 6;
  const vars::VarsGradients grads = vars::vars_backward(eye, tokens, g, cfg);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::fabs(grads.grad_tokens.data()[i] - 2.0 * g.data()[i]) <=
          1e-10);
    CHECK(std::fabs(grads.output.data()[i] - 2.0 * tokens.data()[i]) <=
          1e-10);
  }
}

namespace {

// Sum of g (.) output for the unrolled operator, built from the steps-mode
// solver so the finite-difference probe shares no code with vars_backward.
// gram_eig is pinned at the unperturbed value: the step size is a constant
// of the computation graph, so the probe must not re-derive it from the
// perturbed atoms.
double unrolled_loss(const Matrix& atoms, const Matrix& tokens,
                     const Matrix& g, const vars::SolverConfig& cfg,
                     double gram_eig) {
  double loss = 0.0;
  for (std::size_t c = 0; c < tokens.cols(); ++c) {
    const Vector x = tokens.col(c);
    const vars::SparseCode sc = vars::ista_solve(atoms, x, cfg, gram_eig);
    const Vector r = vars::matvec(atoms, sc.code);
    for (std::size_t i = 0; i < x.size(); ++i) {
      loss += g(i, c) * (r[i] + x[i]);
    }
  }
  return loss;
}

}  // namespace

TEST_CASE("gradients match central differences") {
  const double h = 1e-5;
  for (std::uint64_t seed : {53u, 54u, 55u}) {
    const Matrix atoms = gen::random_atoms(5, 4, seed);
    const Matrix tokens = gen::random_tokens(5, 2, seed + 10);
    const Matrix g = gen::random_matrix(5, 2, seed + 20);
    vars::SolverConfig cfg;
    cfg.lambda = 0.2;
    cfg.steps = 3;
    const double gram_eig = vars::spectral_norm_sq(atoms);
    const vars::VarsGradients grads =
        vars::vars_backward(atoms, tokens, g, cfg);

    for (std::size_t i = 0; i < tokens.size(); ++i) {
      Matrix plus = tokens, minus = tokens;
      plus.data()[i] += h;
      minus.data()[i] -= h;
      const double fd = (unrolled_loss(atoms, plus, g, cfg, gram_eig) -
                         unrolled_loss(atoms, minus, g, cfg, gram_eig)) /
                        (2.0 * h);
      CHECK(std::fabs(grads.grad_tokens.data()[i] - fd) <=
            1e-6 + 1e-4 * std::fabs(fd));
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Matrix plus = atoms, minus = atoms;
      plus.data()[i] += h;
      minus.data()[i] -= h;
      const double fd = (unrolled_loss(plus, tokens, g, cfg, gram_eig) -
                         unrolled_loss(minus, tokens, g, cfg, gram_eig)) /
                        (2.0 * h);
      CHECK(std::fabs(grads.grad_atoms.data()[i] - fd) <=
            1e-6 + 1e-4 * std::fabs(fd));
    }
  }
}
