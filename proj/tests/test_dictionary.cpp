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
#include "vars/dictionary.hpp"
#include "vars/errors.hpp"
#include "vars/rng.hpp"

using vars::Matrix;
using vars::Vector;

namespace {

Vector flatten(const Matrix& m) {
  return Vector(std::vector<double>(m.data(), m.data() + m.size()));
}

}  // namespace

TEST_CASE("static dictionary applies the kernel as a correlation") {
  struct Shape {
    std::size_t kh, kw;
  };
  for (const Shape s : {Shape{3, 3}, Shape{3, 1}, Shape{1, 3}, Shape{2, 2}}) {
    for (std::uint64_t seed : {1u, 2u}) {
      vars::Rng rng(seed);
      const Matrix kernel = vars::gaussian_matrix(s.kh, s.kw, rng);
      const Matrix image = vars::gaussian_matrix(5, 6, rng);
      const vars::StaticDictionary dict = vars::build_static(kernel, 5, 6);
      REQUIRE(dict.atoms.rows() == 30);
      REQUIRE(dict.atoms.cols() == 30);

      const Vector got = vars::matvec_t(dict.atoms, flatten(image));
      const Matrix expect = oracle::correlate(image, kernel);
      for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t c = 0; c < 6; ++c) {
          CHECK(std::fabs(got[r * 6 + c] - expect(r, c)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("delta kernel produces the identity dictionary") {
  const vars::StaticDictionary dict =
      vars::build_static(Matrix(1, 1, 1.0), 3, 4);
  const Matrix eye = Matrix::identity(12);
  CHECK(std::memcmp(dict.atoms.data(), eye.data(),
                    12 * 12 * sizeof(double)) == 0);
  CHECK(dict.grid_h == 3);
  CHECK(dict.grid_w == 4);
  CHECK(dict.kernel_h == 1);
  CHECK(dict.kernel_w == 1);
}

TEST_CASE("static dictionary rejects impossible shapes") {
  CHECK_THROWS_AS(vars::build_static(Matrix(4, 1, 1.0), 3, 5),
                  vars::DimensionError);
  CHECK_THROWS_AS(vars::build_static(Matrix(0, 0), 3, 5),
                  vars::DimensionError);
  CHECK_THROWS_AS(vars::build_static(Matrix(1, 1, 1.0), 0, 5),
                  vars::DimensionError);
}

TEST_CASE("dynamic features are positive and deterministic") {
  const Matrix tokens = gen::random_tokens(6, 4, 11);
  const Matrix proj = gen::random_matrix(4, 7, 12);
  const vars::DynamicDictionary d1 = vars::build_dynamic(tokens, proj);
  const vars::DynamicDictionary d2 = vars::build_dynamic(tokens, proj);
  REQUIRE(d1.atoms.rows() == 6);
  REQUIRE(d1.atoms.cols() == 7);
  for (std::size_t i = 0; i < d1.atoms.size(); ++i) {
    CHECK(d1.atoms.data()[i] > 0.0);
  }
  CHECK(std::memcmp(d1.atoms.data(), d2.atoms.data(),
                    d1.atoms.size() * sizeof(double)) == 0);
  CHECK(d1.source_hash == d2.source_hash);

  Matrix perturbed = tokens;
  perturbed(2, 1) += 1e-9;
  const vars::DynamicDictionary d3 = vars::build_dynamic(perturbed, proj);
  CHECK(d3.source_hash != d1.source_hash);
}

TEST_CASE("seeded projection overload is reproducible") {
  const Matrix tokens = gen::random_tokens(5, 3, 21);
  const vars::DynamicDictionary a = vars::build_dynamic(tokens, 6, 99);
  const vars::DynamicDictionary b = vars::build_dynamic(tokens, 6, 99);
  const vars::DynamicDictionary c = vars::build_dynamic(tokens, 6, 100);
  REQUIRE(a.atoms.cols() == 6);
  CHECK(std::memcmp(a.atoms.data(), b.atoms.data(),
                    a.atoms.size() * sizeof(double)) == 0);
  bool differs = false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    differs = differs || a.atoms.data()[i] != c.atoms.data()[i];
  }
  CHECK(differs);
}

TEST_CASE("feature overflow is rejected, not produced") {
  Matrix tokens(1, 1, 1.0);
  Matrix proj(1, 1, 800.0);  // feature argument 800 - 0.5 overflows exp
  CHECK_THROWS_AS(vars::build_dynamic(tokens, proj),
                  vars::NumericRangeError);
}

TEST_CASE("squared feature map concentrates on exp of the squared norm") {
  // One token, many feature draws: the squared row sum estimates a Gaussian
  // integral with a closed form, giving an independent check of the
  // exp(w.x - |x|^2/2)/sqrt(m) construction.
  vars::Rng rng(4242);
  Matrix token(1, 3);
  token(0, 0) = 0.4;
  token(0, 1) = -0.3;
  token(0, 2) = 0.35;
  const double sq = 0.4 * 0.4 + 0.3 * 0.3 + 0.35 * 0.35;

  const std::size_t features = 10000;
  const Matrix proj = vars::gaussian_matrix(3, features, rng);
  const vars::DynamicDictionary d = vars::build_dynamic(token, proj);
  double gram = 0.0;
  for (std::size_t j = 0; j < features; ++j) {
    gram += d.atoms(0, j) * d.atoms(0, j);
  }
  const double expect = std::exp(sq);
  CHECK(std::fabs(gram - expect) <= 0.05 * expect);
}

TEST_CASE("combine concatenates and checks row counts") {
  vars::StaticDictionary s = vars::build_static(Matrix(1, 1, 1.0), 2, 2);
  const Matrix tokens = gen::random_tokens(4, 3, 31);
  const vars::DynamicDictionary d = vars::build_dynamic(tokens, 5, 32);
  const Matrix both = vars::combine(s, d);
  CHECK(both.rows() == 4);
  CHECK(both.cols() == 4 + 5);
  CHECK(both(1, 1) == s.atoms(1, 1));
  CHECK(both(1, 4) == d.atoms(1, 0));

  vars::StaticDictionary tall = vars::build_static(Matrix(1, 1, 1.0), 3, 2);
  CHECK_THROWS_AS(vars::combine(tall, d), vars::DimensionError);
}

TEST_CASE("normalization yields unit columns and flags dead atoms") {
  const Matrix atoms = gen::random_matrix(6, 4, 41);
  const Matrix normed = vars::normalize_atoms(atoms);
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(vars::norm2(normed.col(c)) == doctest::Approx(1.0).epsilon(1e-12));
    // Direction is preserved.
    const double f = atoms(0, c) / normed(0, c);
    CHECK(f > 0.0);
  }
  Matrix dead = atoms;
  for (std::size_t r = 0; r < 6; ++r) dead(r, 2) = 0.0;
  CHECK_THROWS_AS(vars::normalize_atoms(dead), vars::DegenerateAtomError);
}
