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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qmarkov/geometry.hpp"

namespace qmarkov {

// X = (X^0, X^1, ..., X^k).
class OperatorTuple {
 public:
  OperatorTuple(CMatrix x0, std::vector<CMatrix> xi);
  static OperatorTuple zero(Index dim, std::size_t channels);

  Index dim() const { return x0_.rows(); }
  std::size_t channels() const { return xi_.size(); }
  const CMatrix& x0() const { return x0_; }
  const std::vector<CMatrix>& xi() const { return xi_; }
  const CMatrix& x(std::size_t i) const { return xi_.at(i); }
  double norm() const;

  OperatorTuple& operator+=(const OperatorTuple& other);
  OperatorTuple& operator-=(const OperatorTuple& other);
  OperatorTuple& operator*=(Complex c);
  friend OperatorTuple operator+(OperatorTuple a, const OperatorTuple& b) {
    return a += b;
  }
  friend OperatorTuple operator-(OperatorTuple a, const OperatorTuple& b) {
    return a -= b;
  }
  friend OperatorTuple operator*(Complex c, OperatorTuple a) { return a *= c; }

 private:
  CMatrix x0_;
  std::vector<CMatrix> xi_;
};

enum class QfiConvention { kFourX, kMetric };

std::string_view to_string(QfiConvention c);
// Accepts "four_x" and "metric".
QfiConvention parse_convention(std::string_view text);
double convention_factor(QfiConvention c);

struct QfiMatrix {
  RMatrix values;
  QfiConvention convention;
};

// C(X) = X - tr[rho_ss X] id.
CMatrix centering(const ErgodicDynamics& dyn, const CMatrix& x0);

// dD -> (E(dD), dL^1, ..., dL^k).
OperatorTuple x_map(const DynamicalParams& d, const TangentVector& dd);

// K -> (W(K), i[L^1, K], ..., i[L^k, K]).
OperatorTuple l_map(const DynamicalParams& d, const CMatrix& k);

// R(X) = (C X^0, X^1, ..., X^k) - l_map(W^{-1} C X^0).
OperatorTuple r_projection(const ErgodicDynamics& dyn, const OperatorTuple& x);

// sum_i tr[rho_ss R(X)^i* R(Y)^i]
Complex markov_covariance(const ErgodicDynamics& dyn, const OperatorTuple& x,
                          const OperatorTuple& y);

// Same quantity from the commutator expansion
// tr rho (sum X^i* Y^i - X^0* B - A* Y^0 - i sum X^i* [L^i, B]
//         + i sum [A*, L^i*] Y^i),  A = W^{-1} C X^0, B = W^{-1} C Y^0.
Complex markov_covariance_expanded(const ErgodicDynamics& dyn,
                                   const OperatorTuple& x,
                                   const OperatorTuple& y);

// How the cross-term map is evaluated. kDirect applies
// Phi_X(B) = X^0* B - i sum X^i* [B, L^i] to T_q(Y^0); kRotated applies
// i X^0* (.) + sum X^i* [(.), L^i] to -i T_q(Y^0).
enum class CrossTermForm { kDirect, kRotated };

struct FiniteTimeOptions {
  int quad_steps = 2000;           // composite Simpson intervals (even, >= 4)
  std::optional<CVector> initial;  // phi; default: top eigenvector of rho_ss
  CrossTermForm cross_term = CrossTermForm::kDirect;
};

// Finite-t covariance <F_t(X)* F_t(Y)> in the state phi (x) vacuum, by
// quadrature of the system-space semigroup integrals. X^0, Y^0 must be
// centered.
Complex finite_time_covariance(const ErgodicDynamics& dyn,
                               const OperatorTuple& x, const OperatorTuple& y,
                               double t, const FiniteTimeOptions& opts = {});

// Eigenvector of the largest eigenvalue of rho_ss.
CVector leading_stationary_vector(const ErgodicDynamics& dyn);

// (dD, dD')_D = markov_covariance(x_map(dD), x_map(dD')).
Complex tangent_covariance(const ErgodicDynamics& dyn, const TangentVector& a,
                           const TangentVector& b);

// f_ab = c Re(X[dD_a], X[dD_b])_D with c = 4 (four_x) or 1 (metric).
QfiMatrix qfi_rate(const ErgodicDynamics& dyn,
                   std::span<const TangentVector> tangents,
                   QfiConvention convention);

}  // namespace qmarkov
