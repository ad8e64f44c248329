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

// Random generators and small helpers shared by the test binaries. All
// generators take an explicit engine so every test is reproducible.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qmarkov/covariance.hpp"
#include "qmarkov/geometry.hpp"
#include "qmarkov/lindblad.hpp"
#include "qmarkov/models.hpp"
#include "qmarkov/opspace.hpp"

namespace qmarkov::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline CMatrix random_matrix(Rng& rng, Index d, double scale = 1.0) {
  CMatrix m(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      m(i, j) = scale * Complex(gaussian(rng), gaussian(rng));
    }
  }
  return m;
}

inline CMatrix random_hermitian(Rng& rng, Index d, double scale = 1.0) {
  return re_part(random_matrix(rng, d, scale));
}

inline CMatrix random_unitary(Rng& rng, Index d) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, d));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

inline CVector random_state(Rng& rng, Index d) {
  CVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(gaussian(rng), gaussian(rng));
  return v.normalized();
}

inline CMatrix random_density(Rng& rng, Index d) {
  const CMatrix a = random_matrix(rng, d);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// Generic jump operators make the dynamics ergodic with probability one.
inline DynamicalParams random_dynamics(Rng& rng, Index d, std::size_t k) {
  std::vector<CMatrix> jumps;
  for (std::size_t i = 0; i < k; ++i) {
    jumps.push_back(random_matrix(rng, d, 0.6));
  }
  return DynamicalParams(random_hermitian(rng, d), std::move(jumps));
}

inline TangentVector random_tangent(Rng& rng, Index d, std::size_t k) {
  std::vector<CMatrix> dl;
  for (std::size_t i = 0; i < k; ++i) dl.push_back(random_matrix(rng, d));
  return TangentVector(random_hermitian(rng, d), std::move(dl));
}

inline OperatorTuple random_tuple(Rng& rng, Index d, std::size_t k) {
  std::vector<CMatrix> xi;
  for (std::size_t i = 0; i < k; ++i) xi.push_back(random_matrix(rng, d));
  return OperatorTuple(random_matrix(rng, d), std::move(xi));
}

inline TwoLevelParams random_two_level(Rng& rng) {
  TwoLevelParams p;
  p.alpha = uniform(rng, 0.5, 1.5);
  p.delta = uniform(rng, -1.0, 1.0);
  p.omega = uniform(rng, 0.5, 1.5);
  p.theta = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return p;
}

// Heisenberg generator written out term by term.
inline CMatrix lindblad_oracle(const DynamicalParams& d, const CMatrix& x) {
  const CMatrix& h = d.hamiltonian();
  CMatrix out = kI * (h * x - x * h);
  for (const auto& l : d.jumps()) {
    out += l.adjoint() * x * l - 0.5 * (l.adjoint() * l * x) -
           0.5 * (x * l.adjoint() * l);
  }
  return out;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace qmarkov::testing
