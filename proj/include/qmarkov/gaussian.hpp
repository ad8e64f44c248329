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

#include <functional>
#include <span>
#include <vector>

#include "qmarkov/covariance.hpp"

namespace qmarkov {

// Quadratic-order data of the CCR limit model on a set of identifiable
// directions. F follows `convention`; Sigma is Im(., .)_D; S is the phase
// matrix (zero for linear charts).
struct GaussianLimitModel {
  Index dim_id = 0;
  std::vector<TangentVector> basis;
  RMatrix F;
  RMatrix Sigma;
  RMatrix S;
  QfiConvention convention = QfiConvention::kMetric;
  // Column j holds the coefficients of basis[j] in the input vectors.
  RMatrix change_of_basis;
  double condition_number = 1.0;
};

// J(dD) = (sum_i Re dL^i* L^i, i dL^1, ..., i dL^k); input must satisfy
// |E(dD)| <= tol.identifiable * max(1, |dD|).
TangentVector complex_structure(const ErgodicDynamics& dyn,
                                const TangentVector& dd);

// sigma(a, b) = Im (a, b)_D.
double symplectic_form(const ErgodicDynamics& dyn, const TangentVector& a,
                       const TangentVector& b);

// M_ab = (v_a, v_b)_D.
CMatrix covariance_gram(const ErgodicDynamics& dyn,
                        std::span<const TangentVector> vectors);

// Model in the given (not necessarily canonical) basis.
GaussianLimitModel gaussian_model(const ErgodicDynamics& dyn,
                                  std::vector<TangentVector> directions,
                                  QfiConvention convention);

// Canonical symplectic basis of the real span of `spanning`: Sigma becomes
// a direct sum of [[0, -1], [1, 0]] blocks and F is diagonal. With
// complete_with_j the J-partners of the inputs are added to the span first.
// A span on which sigma is degenerate raises ErrorKind::kNumerical with the
// achieved symplectic rank in the context.
GaussianLimitModel symplectic_basis(const ErgodicDynamics& dyn,
                                    std::span<const TangentVector> spanning,
                                    QfiConvention convention,
                                    bool complete_with_j = false);

// <u|u'> = exp(-1/8 (u - u')^T F (u - u') + i u^T Sigma u').
Complex coherent_overlap(const GaussianLimitModel& model, const RVector& u,
                         const RVector& uprime);

// Second derivatives dD_ab of a chart, stored row-major and symmetric.
struct SecondDerivatives {
  Index size = 0;
  std::vector<TangentVector> entries;

  const TangentVector& at(Index a, Index b) const {
    return entries.at(static_cast<std::size_t>(a * size + b));
  }
};

using ChartMap = std::function<DynamicalParams(const RVector&)>;

// Central differences of `chart` at u = 0 with the given step.
SecondDerivatives finite_difference_second_derivatives(const ChartMap& chart,
                                                       Index m,
                                                       double step = 1e-4);

// S_ab = 1/2 tr[rho_ss (H_ab + Im sum_i L_ab^i* L^i)].
RMatrix phase_matrix(const ErgodicDynamics& dyn,
                     const SecondDerivatives& second);
RMatrix phase_matrix(const ErgodicDynamics& dyn, const ChartMap& chart,
                     Index m, double step = 1e-4);

}  // namespace qmarkov
