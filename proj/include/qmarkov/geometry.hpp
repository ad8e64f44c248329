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

#pragma once

#include <cstddef>
#include <vector>

#include "qmarkov/lindblad.hpp"

namespace qmarkov {

// A perturbation (dH, dL^1, ..., dL^k) of D. dH must be Hermitian.
class TangentVector {
 public:
  TangentVector(CMatrix dh, std::vector<CMatrix> dl,
                const Tolerances& tol = {});
  static TangentVector zero(Index dim, std::size_t channels);

  Index dim() const { return dh_.rows(); }
  std::size_t channels() const { return dl_.size(); }
  const CMatrix& dh() const { return dh_; }
  const std::vector<CMatrix>& dl() const { return dl_; }
  const CMatrix& dl(std::size_t i) const { return dl_.at(i); }

  // Frobenius norm of the stacked tuple.
  double norm() const;

  TangentVector& operator+=(const TangentVector& other);
  TangentVector& operator-=(const TangentVector& other);
  TangentVector& operator*=(double c);
  friend TangentVector operator+(TangentVector a, const TangentVector& b) {
    return a += b;
  }
  friend TangentVector operator-(TangentVector a, const TangentVector& b) {
    return a -= b;
  }
  friend TangentVector operator*(double c, TangentVector a) { return a *= c; }

 private:
  CMatrix dh_;
  std::vector<CMatrix> dl_;
};

// D + c * dD.
DynamicalParams displace(const DynamicalParams& d, const TangentVector& dd,
                         double c = 1.0);

// g = (W, a); W is a representative of its projective class.
struct GaugeElement {
  CMatrix unitary;
  double shift = 0.0;

  GaugeElement(CMatrix w, double a, double tol = 1e-10);
  static GaugeElement identity(Index dim);
};

// (W1, a1) o (W2, a2) = (W2 W1, a1 + a2), so that
// gauge_apply(g1, gauge_apply(g2, D)) = gauge_apply(g1 o g2, D).
GaugeElement compose(const GaugeElement& g1, const GaugeElement& g2);

// (-iK, r) with K Hermitian and tr[rho_ss K] = 0.
struct LieAlgebraElement {
  CMatrix generator;  // K
  double shift = 0.0; // r
};

// Centers K against rho_ss and checks Hermiticity.
LieAlgebraElement make_lie_element(const ErgodicDynamics& dyn, CMatrix k,
                                   double r);

struct EquivalenceWitness {
  bool found = false;
  CMatrix unitary;  // U with L2 = U* L1 U, H2 = U* H1 U - r id
  double shift = 0.0;            // r
  double eigen_real_part = 0.0;  // Re of the leading eigenvalue of W_12
  Complex eigenvalue;
  double threshold = 0.0;        // |Re lambda| bound used for detection
  double proportionality_residual = 0.0;
};

// gD = (W* H W + a id, W* L^i W).
DynamicalParams gauge_apply(const GaugeElement& g, const DynamicalParams& d);
// g_*(dD) = (W* dH W, W* dL^i W).
TangentVector gauge_pushforward(const GaugeElement& g, const TangentVector& dd);

// D_*(-iK, r) = (i[H, K] + r id, i[L^1, K], ..., i[L^k, K]).
TangentVector lie_pushforward(const DynamicalParams& d,
                              const LieAlgebraElement& x);

// E(dD) = dH + Im sum_i dL^i* L^i.
CMatrix e_map(const DynamicalParams& d, const TangentVector& dd);
CMatrix e0_map(const ErgodicDynamics& dyn, const TangentVector& dd);

// omega(dD) = (W^{-1} E0(dD), tr[rho_ss E(dD)]).
LieAlgebraElement connection_form(const ErgodicDynamics& dyn,
                                  const TangentVector& dd);
// P = Id - D_* o omega.
TangentVector horizontal_projection(const ErgodicDynamics& dyn,
                                    const TangentVector& dd);

// Orthonormal Hermitian traceless basis of su(d) (generalized Gell-Mann,
// normalized to tr[A B] = 2 delta).
std::vector<CMatrix> gell_mann_basis(Index dim);

// D_* images of the centered Gell-Mann generators followed by the phase
// direction (id, 0, ..., 0): d^2 vectors.
std::vector<TangentVector> vertical_basis(const ErgodicDynamics& dyn);

// Rescales W by a global phase so that its largest-modulus diagonal entry is
// real positive; falls back to the largest entry overall when the diagonal
// vanishes.
CMatrix normalize_projective(const CMatrix& w);
// min over phases of |A - e^{i phi} B|.
double projective_distance(const CMatrix& a, const CMatrix& b);

// Detects D' = (U* H U - r id, U* L U) through the spectrum of W_{D,D'}.
EquivalenceWitness find_gauge_equivalence(const DynamicalParams& d1,
                                          const DynamicalParams& d2,
                                          const Tolerances& tol = {});

}  // namespace qmarkov
