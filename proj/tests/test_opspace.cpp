// Copyright 2026 The qmarkov Authors
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

#include "qmarkov/opspace.hpp"

#include <algorithm>

#include "doctest.h"
#include "support.hpp"

using namespace qmarkov;
using namespace qmarkov::testing;

TEST_CASE("vectorize stacks columns") {
  CVector v = vectorize(CMatrix::Identity(2, 2));
  CHECK(v.size() == 4);
  CHECK(v(0) == Complex(1));
  CHECK(v(1) == Complex(0));
  CHECK(v(2) == Complex(0));
  CHECK(v(3) == Complex(1));

  CVector e = vectorize(matrix_unit(2, 0, 1));
  CHECK(e(2) == Complex(1));
  CHECK(e.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("vectorize and devectorize are inverse for d up to 8") {
  Rng rng(11);
  for (Index d = 1; d <= 8; ++d) {
    CMatrix x = random_matrix(rng, d);
    CHECK(devectorize(vectorize(x), d) == x);
    CHECK(vectorize(x)((d - 1) * d) == x(0, d - 1));
  }
  CHECK_THROWS_AS(devectorize(CVector::Zero(5), 2), Error);
}

TEST_CASE("hs_inner") {
  const CMatrix id = CMatrix::Identity(2, 2);
  CHECK(hs_inner(id, id) == Complex(2));
  CHECK(hs_inner(matrix_unit(2, 0, 1), matrix_unit(2, 0, 1)) == Complex(1));
  Rng rng(12);
  CMatrix a = random_matrix(rng, 3);
  CMatrix b = random_matrix(rng, 3);
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-13);
  CHECK(std::abs(hs_inner(kI * a, b) + kI * hs_inner(a, b)) < 1e-13);
  CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
  CHECK_THROWS_AS(hs_inner(a, id), Error);
}

TEST_CASE("left_right_superop") {
  const CMatrix id = CMatrix::Identity(2, 2);
  CHECK(left_right_superop(id, id).matrix() == CMatrix::Identity(4, 4));
  CHECK(left_right_superop(id, matrix_unit(2, 0, 1)).apply(id) ==
        matrix_unit(2, 0, 1));

  Rng rng(13);
  for (Index d : {2, 3, 5}) {
    CMatrix a = random_matrix(rng, d);
    CMatrix b = random_matrix(rng, d);
    CMatrix c = random_matrix(rng, d);
    CMatrix e = random_matrix(rng, d);
    CMatrix x = random_matrix(rng, d);
    CHECK(max_abs(left_right_superop(a, b).apply(x) - a * x * b) < 1e-13 * 10);
    // (C . D) o (A . B) = CA . BD
    Superoperator lhs = left_right_superop(c, e) * left_right_superop(a, b);
    CHECK(max_abs(lhs.matrix() - left_right_superop(c * a, b * e).matrix()) <
          1e-12 * std::max(1.0, lhs.norm()));
  }
  CHECK_THROWS_AS(left_right_superop(CMatrix::Identity(2, 2),
                                     CMatrix::Identity(3, 3)),
                  Error);
}

TEST_CASE("superoperator algebra and adjoint") {
  Rng rng(14);
  Superoperator s(random_matrix(rng, 9));
  CMatrix a = random_matrix(rng, 3);
  CMatrix b = random_matrix(rng, 3);
  CHECK(std::abs(hs_inner(s.adjoint().apply(a), b) - hs_inner(a, s.apply(b))) <
        1e-12);
  Superoperator sum = s + Superoperator::identity(3);
  CHECK(max_abs(sum.apply(b) - s.apply(b) - b) < 1e-13);
  CHECK(max_abs(Superoperator::zero(3).apply(b)) == 0.0);
  CHECK_THROWS_AS(Superoperator(CMatrix::Identity(5, 5)), Error);
  CHECK_THROWS_AS(s.apply(CMatrix::Identity(2, 2)), Error);
}

TEST_CASE("expm") {
  Rng rng(15);
  Superoperator s(random_matrix(rng, 4, 0.5));
  CHECK(expm(s, 0.0).matrix() == CMatrix::Identity(4, 4));
  CHECK(max_abs(expm(Superoperator::zero(2), 3.7).matrix() -
                CMatrix::Identity(4, 4)) < 1e-15);

  // S(X) = E01 X is nilpotent.
  Superoperator nil =
      left_right_superop(matrix_unit(2, 0, 1), CMatrix::Identity(2, 2));
  CHECK(max_abs((nil * nil).matrix()) == 0.0);
  for (double t : {0.3, 2.0, 17.0}) {
    CMatrix expected = CMatrix::Identity(4, 4) + t * nil.matrix();
    CHECK(max_abs(expm(nil, t).matrix() - expected) < 1e-13 * (1 + t));
  }

  for (auto [t1, t2] : {std::pair{0.2, 0.7}, std::pair{1.5, 3.0}}) {
    CMatrix lhs = (expm(s, t1) * expm(s, t2)).matrix();
    CMatrix rhs = expm(s, t1 + t2).matrix();
    CHECK(max_abs(lhs - rhs) < 1e-11 * std::max(1.0, rhs.norm()));
  }
  CHECK_THROWS_AS(expm(s, -1.0), Error);
}

TEST_CASE("expm first-order residual decays quadratically") {
  Rng rng(16);
  Superoperator s(random_matrix(rng, 9));
  CMatrix x = random_matrix(rng, 3);
  auto residual = [&](double h) {
    return (expm(s, h).apply(x) - x - h * s.apply(x)).norm();
  };
  const double r4 = residual(1e-4);
  const double r5 = residual(1e-5);
  const double order = std::log10(r4 / r5);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("eig of a commutator superoperator") {
  // S(X) = i [sigma_z, X]
  const CMatrix id = CMatrix::Identity(2, 2);
  Superoperator s = kI * (left_right_superop(pauli_z(), id) -
                          left_right_superop(id, pauli_z()));
  auto pairs = eig(s);
  REQUIRE(pairs.size() == 4);
  std::vector<double> im;
  for (const auto& p : pairs) {
    CHECK(std::abs(p.value.real()) < 1e-12);
    im.push_back(p.value.imag());
    CHECK(max_abs(s.apply(p.vector) - p.value * p.vector) < 1e-10);
  }
  std::sort(im.begin(), im.end());
  CHECK(im[0] == doctest::Approx(-2.0));
  CHECK(im[1] == doctest::Approx(0.0));
  CHECK(im[2] == doctest::Approx(0.0));
  CHECK(im[3] == doctest::Approx(2.0));

  for (const auto& ev : eigenvalues(Superoperator::identity(3))) {
    CHECK(std::abs(ev - Complex(1.0)) < 1e-14);
  }
}

TEST_CASE("eig residuals on random superoperators") {
  Rng rng(17);
  for (int n = 0; n < 10; ++n) {
    Superoperator s(random_matrix(rng, 16));
    for (const auto& p : eig(s)) {
      CHECK((s.apply(p.vector) - p.value * p.vector).norm() <
            1e-10 * s.norm());
    }
  }
}

TEST_CASE("helpers") {
  CHECK(is_hermitian(pauli_y(), 1e-12));
  CHECK(!is_hermitian(matrix_unit(2, 0, 1), 1e-12));
  CHECK(is_unitary(pauli_y(), 1e-12));
  CHECK(max_abs(commutator(pauli_x(), pauli_y()) - 2.0 * kI * pauli_z()) == 0);
  CHECK(max_abs(im_part(kI * CMatrix::Identity(2, 2)) -
                CMatrix::Identity(2, 2)) == 0);
  CHECK(all_finite(pauli_x()));
}
