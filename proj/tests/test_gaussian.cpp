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

#include "qmarkov/gaussian.hpp"

#include "doctest.h"
#include "qmarkov/models.hpp"
#include "support.hpp"

using namespace qmarkov;
using namespace qmarkov::testing;

namespace {

TangentVector random_identifiable(Rng& rng, const ErgodicDynamics& dyn) {
  return horizontal_projection(
      dyn, random_tangent(rng, dyn.dim(), dyn.channels()));
}

RMatrix canonical_sigma(Index n) {
  RMatrix s = RMatrix::Zero(n, n);
  for (Index p = 0; p + 1 < n; p += 2) {
    s(p, p + 1) = -1.0;
    s(p + 1, p) = 1.0;
  }
  return s;
}

double off_diagonal(const RMatrix& m) {
  RMatrix o = m;
  o.diagonal().setZero();
  return o.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("complex structure") {
  Rng rng(71);
  DynamicalParams dp = random_dynamics(rng, 3, 1);
  const ErgodicDynamics dyn(dp);
  const CMatrix& l = dp.jump(0);
  TangentVector v(CMatrix::Zero(3, 3), {l});
  TangentVector jv = complex_structure(dyn, v);
  CHECK(max_abs(jv.dh() - l.adjoint() * l) < 1e-14);
  CHECK(max_abs(jv.dl(0) - kI * l) == 0.0);
  CHECK(max_abs(e_map(dp, jv)) < 1e-13);

  for (int n = 0; n < 20; ++n) {
    const ErgodicDynamics d2(random_dynamics(rng, 2 + n % 3, 1 + n % 2));
    TangentVector a = random_identifiable(rng, d2);
    TangentVector ja = complex_structure(d2, a);
    CHECK((complex_structure(d2, ja) + a).norm() < 1e-10);
    OperatorTuple lhs = x_map(d2.params(), ja);
    OperatorTuple rhs = kI * x_map(d2.params(), a);
    CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, a.norm()));

    TangentVector b = random_identifiable(rng, d2);
    TangentVector jb = complex_structure(d2, b);
    CHECK(std::abs(tangent_covariance(d2, ja, jb).real() -
                   tangent_covariance(d2, a, b).real()) < 1e-10);
  }
  CHECK_THROWS_AS(complex_structure(dyn, random_tangent(rng, 3, 1)), Error);
}

TEST_CASE("symplectic form") {
  Rng rng(72);
  const ErgodicDynamics dyn(random_dynamics(rng, 3, 2));
  for (int n = 0; n < 10; ++n) {
    TangentVector a = random_identifiable(rng, dyn);
    TangentVector b = random_identifiable(rng, dyn);
    CHECK(std::abs(symplectic_form(dyn, a, a)) < 1e-12);
    CHECK(std::abs(symplectic_form(dyn, a, b) + symplectic_form(dyn, b, a)) <
          1e-12);
    // sigma(J a, b) = -Re(a, b).
    CHECK(std::abs(symplectic_form(dyn, complex_structure(dyn, a), b) +
                   tangent_covariance(dyn, a, b).real()) < 1e-10);
  }
  const TwoLevelParams p{};
  const ErgodicDynamics tl(two_level(p));
  const TwoLevelTangents tan = two_level_tangents(p);
  CHECK(symplectic_form(tl, tan.symplectic[0], tan.symplectic[1]) ==
        doctest::Approx(-1.0));
}

TEST_CASE("two-level symplectic basis from the closed form") {
  Rng rng(73);
  for (int n = 0; n < 10; ++n) {
    const TwoLevelParams p = random_two_level(rng);
    const ErgodicDynamics dyn(two_level(p));
    const TwoLevelTangents tan = two_level_tangents(p);
    const TwoLevelReference ref = two_level_reference(p);
    std::vector<TangentVector> basis(tan.symplectic.begin(),
                                     tan.symplectic.end());
    for (const auto& v : basis) CHECK(max_abs(e_map(dyn.params(), v)) < 1e-12);
    GaussianLimitModel m = gaussian_model(dyn, basis, QfiConvention::kMetric);
    CHECK((m.Sigma - canonical_sigma(4)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(off_diagonal(m.F) < 1e-8);
    for (int i = 0; i < 4; ++i) {
      CHECK(rel_err(m.F(i, i), ref.symplectic_F[i]) < 1e-8);
    }
    CHECK(std::abs(m.F(0, 0) * m.F(1, 1) - 1.0) < 1e-8);
    CHECK(std::abs(m.F(2, 2) * m.F(3, 3) - 1.0) < 1e-8);
  }
}

TEST_CASE("the literal first q vector is not identifiable off theta = 0") {
  const TwoLevelParams p{1.0, 0.0, 1.0, 0.7};
  const ErgodicDynamics dyn(two_level(p));
  TangentVector literal(CMatrix::Zero(2, 2), {matrix_unit(2, 0, 1)});
  CHECK(max_abs(e_map(dyn.params(), literal)) > 0.1);
}

TEST_CASE("symplectic basis construction") {
  Rng rng(74);
  for (int n = 0; n < 10; ++n) {
    const ErgodicDynamics dyn(random_dynamics(rng, 2 + n % 2, 1 + n % 2));
    std::vector<TangentVector> span;
    for (int i = 0; i < 3; ++i) span.push_back(random_identifiable(rng, dyn));
    GaussianLimitModel m =
        symplectic_basis(dyn, span, QfiConvention::kMetric, true);
    REQUIRE(m.dim_id == 6);
    CHECK((m.Sigma - canonical_sigma(6)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(off_diagonal(m.F) < 1e-8);
    CHECK(m.F.diagonal().minCoeff() > 0.0);
    CHECK(std::isfinite(m.condition_number));
    for (const auto& v : m.basis) {
      CHECK(max_abs(e_map(dyn.params(), v)) < 1e-9);
    }
  }
}

TEST_CASE("single complex pair") {
  Rng rng(75);
  const ErgodicDynamics dyn(random_dynamics(rng, 3, 1));
  TangentVector v = random_identifiable(rng, dyn);
  std::vector<TangentVector> pair{v, complex_structure(dyn, v)};
  GaussianLimitModel m = symplectic_basis(dyn, pair, QfiConvention::kFourX);
  REQUIRE(m.dim_id == 2);
  CHECK((m.Sigma - canonical_sigma(2)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(m.F(0, 1)) < 1e-8);
  CHECK(m.convention == QfiConvention::kFourX);
  // Metric in the four_x convention is 4 times the unit-Kahler value.
  CHECK(m.F(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("degenerate spans are reported") {
  Rng rng(76);
  const ErgodicDynamics dyn(random_dynamics(rng, 3, 1));
  TangentVector v = random_identifiable(rng, dyn);
  std::vector<TangentVector> lone{v};
  try {
    symplectic_basis(dyn, lone, QfiConvention::kMetric);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumerical);
    CHECK(e.context().find("symplectic rank 0") != std::string::npos);
  }
  GaussianLimitModel completed =
      symplectic_basis(dyn, lone, QfiConvention::kMetric, true);
  CHECK(completed.dim_id == 2);

  std::vector<TangentVector> dependent{v, 2.0 * v, complex_structure(dyn, v)};
  GaussianLimitModel m = symplectic_basis(dyn, dependent, QfiConvention::kMetric);
  CHECK(m.dim_id == 2);
  std::vector<TangentVector> vertical{vertical_basis(dyn)[0]};
  CHECK_THROWS_AS(symplectic_basis(dyn, vertical, QfiConvention::kMetric),
                  Error);
}

TEST_CASE("coherent overlap") {
  GaussianLimitModel m;
  m.dim_id = 2;
  m.F = 2.0 * RMatrix::Identity(2, 2);
  m.Sigma = canonical_sigma(2);
  RVector u(2), v(2);
  u << 1.0, 0.0;
  v << 0.0, 1.0;
  Complex expected = std::exp(Complex(-0.5, -1.0));
  CHECK(std::abs(coherent_overlap(m, u, v) - expected) < 1e-15);
  CHECK(std::abs(coherent_overlap(m, u, u) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(coherent_overlap(m, u, RVector::Zero(2))) -
                 std::exp(-0.25)) < 1e-15);
  CHECK_THROWS_AS(coherent_overlap(m, u, RVector::Zero(3)), Error);
}

TEST_CASE("coherent Gram matrices are positive definite") {
  Rng rng(77);
  for (int n = 0; n < 5; ++n) {
    const ErgodicDynamics dyn(random_dynamics(rng, 3, 2));
    std::vector<TangentVector> span{random_identifiable(rng, dyn),
                                    random_identifiable(rng, dyn)};
    GaussianLimitModel m =
        symplectic_basis(dyn, span, QfiConvention::kFourX, true);
    std::vector<RVector> pts;
    for (int i = 0; i < 5; ++i) {
      RVector u(m.dim_id);
      for (Index j = 0; j < m.dim_id; ++j) u(j) = uniform(rng, -1.5, 1.5);
      pts.push_back(u);
    }
    CMatrix gram(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) gram(i, j) = coherent_overlap(m, pts[i], pts[j]);
    }
    CHECK(max_abs(gram - gram.adjoint()) < 1e-12);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("phase matrix") {
  Rng rng(78);
  DynamicalParams dp = two_level({1.0, 0.3, 0.8, 0.2});
  const ErgodicDynamics dyn(dp);
  SecondDerivatives zero{1, {TangentVector::zero(2, 1)}};
  CHECK(phase_matrix(dyn, zero).cwiseAbs().maxCoeff() == 0.0);

  SecondDerivatives sz{1, {TangentVector(pauli_z(), {CMatrix::Zero(2, 2)})}};
  CHECK(phase_matrix(dyn, sz)(0, 0) ==
        doctest::Approx(0.5 * dyn.mean(pauli_z()).real()));

  // Quadratic chart with random second-order data.
  const Index m = 2;
  std::vector<TangentVector> first{random_tangent(rng, 2, 1),
                                   random_tangent(rng, 2, 1)};
  TangentVector s01 = random_tangent(rng, 2, 1);
  SecondDerivatives exact{m, {random_tangent(rng, 2, 1), s01, s01,
                              random_tangent(rng, 2, 1)}};
  ChartMap chart = [&](const RVector& u) {
    TangentVector shift = u(0) * first[0] + u(1) * first[1];
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        shift += (0.5 * u(a) * u(b)) * exact.at(a, b);
      }
    }
    return displace(dp, shift);
  };
  RMatrix analytic = phase_matrix(dyn, exact);
  RMatrix numeric = phase_matrix(dyn, chart, m, 1e-4);
  CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((analytic - analytic.transpose()).cwiseAbs().maxCoeff() == 0.0);
}
