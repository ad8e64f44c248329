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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmarkov/gaussian.hpp"

namespace qmarkov {

// The off-diagonal generator W_{D,D'} is declared in lindblad.hpp as
// offdiag_generator.

// u -> D(u) = D0 + sum_a u_a dD_a + 1/2 sum_ab u_a u_b ddD_ab.
// Every direction must be identifiable at D0.
class LocalChart {
 public:
  LocalChart(const DynamicalParams& base, std::vector<TangentVector> directions,
             std::optional<SecondDerivatives> second = std::nullopt,
             const Tolerances& tol = {});

  const ErgodicDynamics& base() const { return base_; }
  const std::vector<TangentVector>& directions() const { return directions_; }
  const std::optional<SecondDerivatives>& second_derivatives() const {
    return second_;
  }
  Index size() const { return static_cast<Index>(directions_.size()); }

  // Limit model on the chart directions, four_x convention, S included.
  const GaussianLimitModel& model() const { return model_; }

  TangentVector first_order(const RVector& u) const;
  TangentVector second_order(const RVector& u) const;
  DynamicalParams point(const RVector& u) const;

 private:
  ErgodicDynamics base_;
  std::vector<TangentVector> directions_;
  std::optional<SecondDerivatives> second_;
  GaussianLimitModel model_;
};

// D(u) = D0 + sum_a u_a P(dD_a).
LocalChart linear_horizontal_chart(const DynamicalParams& base,
                                   std::span<const TangentVector> tangents,
                                   const Tolerances& tol = {});

// <phi| exp(t W_{D(u/sqrt t), D(u'/sqrt t)})(id) |phi>. Both scaled points
// are checked for ergodicity. Default phi: top eigenvector of rho_ss.
Complex finite_overlap(const LocalChart& chart, const RVector& u,
                       const RVector& uprime, double t,
                       const std::optional<CVector>& phi = std::nullopt);

// exp f(u, u') with f = tr[rho_ss (1/2 L2(id) - L1 W^{-1} C L1(id))], from
// the expansion of W_{D(eps u), D(eps u')} in eps = 1/sqrt(t).
Complex limit_overlap(const LocalChart& chart, const RVector& u,
                      const RVector& uprime);

// exp(-1/8 du^T f du + i u^T sigma u' + i (u^T S u - u'^T S u')) with f in
// the four_x convention.
Complex limit_overlap_closed_form(const LocalChart& chart, const RVector& u,
                                  const RVector& uprime);

inline constexpr const char* kLanPhaseConvention = "exp(i(phi(u)-phi(u')))";

struct LanReport {
  std::vector<double> t_values;
  std::vector<Complex> finite_overlaps;
  std::vector<double> errors;
  Complex limit_value;
  Complex closed_form_value;
  RMatrix phase_matrix_used;
  double max_abs_error = 0.0;  // error at the largest t
  std::string phase_convention = kLanPhaseConvention;
  QfiConvention f_convention = QfiConvention::kFourX;
};

LanReport lan_convergence(const LocalChart& chart, const RVector& u,
                          const RVector& uprime,
                          std::span<const double> t_values,
                          const std::optional<CVector>& phi = std::nullopt);

// tr[rho_1^out(t) rho_2^out(t)] =
//   sum Lambda1_n Lambda2_n' |<e1_n| T12_t(|e1_m><e2_m'|) |e2_n'>|^2.
double output_overlap_trace(const DynamicalParams& d1,
                            const DynamicalParams& d2, double t,
                            const Tolerances& tol = {});

}  // namespace qmarkov
