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

#include "qmarkov/lindblad.hpp"

#include "doctest.h"
#include "qmarkov/models.hpp"
#include "support.hpp"

using namespace qmarkov;
using namespace qmarkov::testing;

namespace {

CMatrix symmetric_point_rho() {
  CMatrix rho(2, 2);
  rho << 2.0 / 3.0, kI / 3.0, -kI / 3.0, 1.0 / 3.0;
  return rho;
}

}  // namespace

TEST_CASE("dynamical parameters are validated") {
  CHECK_THROWS_AS(DynamicalParams(matrix_unit(2, 0, 1), {}), Error);
  CHECK_THROWS_AS(
      DynamicalParams(CMatrix::Zero(2, 2), {CMatrix::Zero(3, 3)}), Error);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DynamicalParams(bad, {}), Error);
  try {
    DynamicalParams(matrix_unit(2, 0, 1), {});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kPrecondition);
    CHECK(e.module() == "lindblad");
    CHECK(e.context().find("|H - H*|") != std::string::npos);
  }
}

TEST_CASE("generator special cases") {
  DynamicalParams zero(CMatrix::Zero(2, 2), {CMatrix::Zero(2, 2)});
  CHECK(max_abs(heisenberg_generator(zero).matrix()) == 0.0);
  CHECK(max_abs(schrodinger_generator(zero).matrix()) == 0.0);

  Rng rng(21);
  CMatrix h = random_hermitian(rng, 3);
  DynamicalParams closed(h, {});
  CMatrix x = random_matrix(rng, 3);
  CHECK(max_abs(heisenberg_generator(closed).apply(x) -
                kI * commutator(h, x)) < 1e-12);
}

TEST_CASE("generator matches the term-by-term oracle") {
  Rng rng(22);
  for (Index d : {1, 2, 3, 4}) {
    for (std::size_t k : {0u, 1u, 2u}) {
      DynamicalParams dp = random_dynamics(rng, d, k);
      CMatrix x = random_matrix(rng, d);
      CMatrix expected = lindblad_oracle(dp, x);
      CHECK(max_abs(heisenberg_generator(dp).apply(x) - expected) < 1e-12);
      CHECK(max_abs(apply_heisenberg(dp, x) - expected) < 1e-12);
    }
  }
}

TEST_CASE("unitality and trace preservation") {
  Rng rng(23);
  for (int n = 0; n < 20; ++n) {
    const Index d = 2 + n % 3;
    DynamicalParams dp = random_dynamics(rng, d, 1 + n % 2);
    const CMatrix id = CMatrix::Identity(d, d);
    CHECK(max_abs(heisenberg_generator(dp).apply(id)) < 1e-12);
    CMatrix rho = random_density(rng, d);
    CHECK(std::abs(schrodinger_generator(dp).apply(rho).trace()) < 1e-12);
    // Hermitian inputs give Hermitian outputs.
    CMatrix hx = random_hermitian(rng, d);
    CMatrix w = heisenberg_generator(dp).apply(hx);
    CHECK(max_abs(w - w.adjoint()) < 1e-12);
  }
}

TEST_CASE("Heisenberg and Schrodinger generators are trace dual") {
  Rng rng(24);
  DynamicalParams tl = two_level({});
  for (int n = 0; n < 10; ++n) {
    for (const DynamicalParams& dp : {tl, random_dynamics(rng, 3, 2)}) {
      const Index d = dp.dim();
      CMatrix rho = random_matrix(rng, d);
      CMatrix x = random_matrix(rng, d);
      Complex lhs = hs_inner(schrodinger_generator(dp).apply(rho).adjoint(), x);
      Complex rhs = hs_inner(rho.adjoint(), heisenberg_generator(dp).apply(x));
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("two-level stationary state") {
  DynamicalParams tl = two_level({});
  CHECK(max_abs(schrodinger_generator(tl).apply(symmetric_point_rho())) < 1e-14);
  ErgodicityReport rep = stationary_state(tl);
  REQUIRE(rep.ergodic);
  CHECK(rep.zero_eigen_count == 1);
  CHECK(max_abs(*rep.stationary - symmetric_point_rho()) < 1e-12);
  CHECK(rep.spectral_gap == doctest::Approx(0.5));
  CHECK(rep.min_stationary_eigenvalue > 0.0);
}

TEST_CASE("non-ergodic dynamics are flagged") {
  Rng rng(25);
  ErgodicityReport closed = stationary_state(
      DynamicalParams(random_hermitian(rng, 3), {}));
  CHECK(!closed.ergodic);
  CHECK(closed.zero_eigen_count >= 3);

  ErgodicityReport decay =
      stationary_state(DynamicalParams(CMatrix::Zero(2, 2),
                                       {matrix_unit(2, 0, 1)}));
  CHECK(!decay.ergodic);
  CHECK(decay.zero_eigen_count == 1);
  REQUIRE(decay.stationary);
  CHECK(max_abs(*decay.stationary - matrix_unit(2, 0, 0)) < 1e-12);
  CHECK(decay.min_stationary_eigenvalue < 1e-10);

  CHECK_THROWS_AS(ErgodicDynamics(DynamicalParams(CMatrix::Zero(2, 2),
                                                  {matrix_unit(2, 0, 1)})),
                  Error);
  CHECK_THROWS_AS(restricted_inverse(DynamicalParams(CMatrix::Zero(2, 2), {}),
                                     CMatrix::Zero(2, 2)),
                  Error);
}

TEST_CASE("spectrum of ergodic generators") {
  Rng rng(26);
  for (int n = 0; n < 20; ++n) {
    DynamicalParams dp = random_dynamics(rng, 2 + n % 3, 1 + n % 2);
    ErgodicityReport rep = stationary_state(dp);
    REQUIRE(rep.ergodic);
    const Superoperator w = heisenberg_generator(dp);
    int zeros = 0;
    for (const auto& ev : eigenvalues(w)) {
      if (std::abs(ev) < rep.rank_tol) {
        ++zeros;
      } else {
        CHECK(ev.real() < 0.0);
      }
    }
    CHECK(zeros == 1);
    const CMatrix& rho = *rep.stationary;
    CHECK(max_abs(schrodinger_generator(dp).apply(rho)) < 1e-10);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
    CHECK(max_abs(rho - rho.adjoint()) < 1e-14);
  }
}

TEST_CASE("restricted inverse") {
  Rng rng(27);
  for (int n = 0; n < 20; ++n) {
    const ErgodicDynamics dyn(random_dynamics(rng, 2 + n % 3, 1 + n % 2));
    CMatrix k0 = dyn.center(random_matrix(rng, dyn.dim()));
    CMatrix x = dyn.generator().apply(k0);
    CMatrix k = dyn.invert(x);
    CHECK(max_abs(k - k0) < 1e-9);
    CHECK(max_abs(dyn.generator().apply(k) - x) < 1e-10);
    CHECK(std::abs(dyn.mean(k)) < 1e-12);
  }
  const ErgodicDynamics tl(two_level({}));
  CHECK(max_abs(tl.invert(CMatrix::Zero(2, 2))) == 0.0);
  CHECK_THROWS_AS(tl.invert(CMatrix::Identity(2, 2)), Error);
  CHECK_THROWS_AS(tl.invert(CMatrix::Identity(3, 3)), Error);
}

TEST_CASE("restricted inverse agrees with the integrated semigroup") {
  Rng rng(28);
  for (const DynamicalParams& dp : {two_level({}), random_dynamics(rng, 3, 1)}) {
    const ErgodicDynamics dyn(dp);
    const CMatrix x = dyn.center(random_matrix(rng, dyn.dim()));
    const double horizon = 50.0 / dyn.spectral_gap();
    // Composite Simpson for -int_0^T T_s(X) ds.
    const int steps = 4000;
    const double h = horizon / steps;
    const Superoperator step = expm(dyn.generator(), h);
    CVector v = vectorize(x);
    CVector acc = CVector::Zero(v.size());
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * v;
      v = step.matrix() * v;
    }
    const CMatrix integral = devectorize(acc * (h / 3.0), dyn.dim());
    CHECK(max_abs(dyn.invert(x) + integral) < 1e-6);
  }
}

TEST_CASE("semigroup") {
  Rng rng(29);
  DynamicalParams tl = two_level({});
  const ErgodicDynamics dyn(tl);
  CMatrix x = random_matrix(rng, 2);
  CHECK(max_abs(semigroup_apply(tl, 0.0, x) - x) == 0.0);
  for (double t : {0.5, 3.0, 40.0}) {
    CHECK(max_abs(semigroup_apply(tl, t, CMatrix::Identity(2, 2)) -
                  CMatrix::Identity(2, 2)) < 1e-12);
    CHECK(std::abs(dyn.mean(semigroup_apply(tl, t, x)) - dyn.mean(x)) < 1e-12);
  }
  const double t = 100.0 / dyn.spectral_gap();
  for (int n = 0; n < 5; ++n) {
    CMatrix y = random_matrix(rng, 2);
    CHECK(max_abs(dyn.evolve(t, y) - dyn.mean(y) * CMatrix::Identity(2, 2)) <
          1e-8);
  }
  CHECK_THROWS_AS(semigroup_apply(tl, -0.1, x), Error);
}

TEST_CASE("evolved states stay positive") {
  Rng rng(30);
  for (int n = 0; n < 20; ++n) {
    DynamicalParams dp = random_dynamics(rng, 3, 2);
    CMatrix rho = random_density(rng, 3);
    const double t = uniform(rng, 0.0, 10.0);
    CMatrix out = expm(schrodinger_generator(dp), t).apply(rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(re_part(out));
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    CHECK(std::abs(out.trace() - 1.0) < 1e-10);
  }
}
