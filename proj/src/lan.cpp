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

#include "qmarkov/lan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "lan";

std::string describe(const RVector& u) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < u.size(); ++i) os << (i ? "," : "") << u(i);
  os << ")";
  return os.str();
}

void require_length(const LocalChart& chart, const RVector& u) {
  if (u.size() != chart.size()) {
    throw Error(ErrorKind::kDimension, kModule,
                "chart coordinate length mismatch",
                std::to_string(u.size()) + " vs " +
                    std::to_string(chart.size()));
  }
}

ErgodicDynamics checked_point(const LocalChart& chart, const RVector& u,
                              double t) {
  try {
    return ErgodicDynamics(chart.point(u), chart.base().tolerances());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kPrecondition) throw;
    std::ostringstream ctx;
    ctx << "u/sqrt(t) = " << describe(u) << ", t = " << t << ": "
        << e.context();
    throw Error(ErrorKind::kPrecondition, kModule,
                "chart point outside the ergodic region", ctx.str());
  }
}

// Expansion data of W_{D(eps u), D(eps u')} around eps = 0.
struct Expansion {
  CMatrix h1, h1p, h2, h2p;
  std::vector<CMatrix> l1, l1p, l2, l2p;
};

Expansion expand(const LocalChart& chart, const RVector& u,
                 const RVector& uprime) {
  const TangentVector a1 = chart.first_order(u);
  const TangentVector b1 = chart.first_order(uprime);
  const TangentVector a2 = chart.second_order(u);
  const TangentVector b2 = chart.second_order(uprime);
  return {a1.dh(), b1.dh(), a2.dh(), b2.dh(),
          a1.dl(), b1.dl(), a2.dl(), b2.dl()};
}

// First-order coefficient L1 applied to X.
CMatrix apply_l1(const DynamicalParams& d, const Expansion& e,
                 const CMatrix& x) {
  CMatrix out = kI * (e.h1 * x - x * e.h1p);
  for (std::size_t i = 0; i < d.channels(); ++i) {
    const CMatrix& l0 = d.jump(i);
    const CMatrix& a = e.l1[i];
    const CMatrix& b = e.l1p[i];
    out += a.adjoint() * x * l0 + l0.adjoint() * x * b;
    out -= 0.5 * (a.adjoint() * l0 + l0.adjoint() * a) * x;
    out -= 0.5 * x * (b.adjoint() * l0 + l0.adjoint() * b);
  }
  return out;
}

// Second-order coefficient (half of L2) applied to X.
CMatrix apply_l2_half(const DynamicalParams& d, const Expansion& e,
                      const CMatrix& x) {
  CMatrix out = kI * (e.h2 * x - x * e.h2p);
  for (std::size_t i = 0; i < d.channels(); ++i) {
    const CMatrix& l0 = d.jump(i);
    const CMatrix& a1 = e.l1[i];
    const CMatrix& b1 = e.l1p[i];
    const CMatrix& a2 = e.l2[i];
    const CMatrix& b2 = e.l2p[i];
    out += a2.adjoint() * x * l0 + l0.adjoint() * x * b2 +
           a1.adjoint() * x * b1;
    out -= 0.5 * (a2.adjoint() * l0 + l0.adjoint() * a2 + a1.adjoint() * a1) *
           x;
    out -= 0.5 * x *
           (b2.adjoint() * l0 + l0.adjoint() * b2 + b1.adjoint() * b1);
  }
  return out;
}

}  // namespace

LocalChart::LocalChart(const DynamicalParams& base,
                       std::vector<TangentVector> directions,
                       std::optional<SecondDerivatives> second,
                       const Tolerances& tol)
    : base_(base, tol),
      directions_(std::move(directions)),
      second_(std::move(second)) {
  for (std::size_t a = 0; a < directions_.size(); ++a) {
    const auto& v = directions_[a];
    if (v.dim() != base.dim() || v.channels() != base.channels()) {
      throw Error(ErrorKind::kDimension, kModule,
                  "chart direction does not match the base point",
                  "direction " + std::to_string(a));
    }
    const double e = e_map(base, v).norm();
    if (e > tol.identifiable) {
      throw Error(ErrorKind::kPrecondition, kModule,
                  "chart direction is not identifiable",
                  "direction " + std::to_string(a) +
                      ", |E| = " + std::to_string(e));
    }
  }
  if (second_) {
    if (second_->size != size() ||
        second_->entries.size() != directions_.size() * directions_.size()) {
      throw Error(ErrorKind::kDimension, kModule,
                  "second derivatives do not match the chart size");
    }
  }
  model_ = gaussian_model(base_, directions_, QfiConvention::kFourX);
  if (second_) model_.S = phase_matrix(base_, *second_);
}

TangentVector LocalChart::first_order(const RVector& u) const {
  require_length(*this, u);
  TangentVector out = TangentVector::zero(base_.dim(), base_.channels());
  for (Index a = 0; a < size(); ++a) {
    out += u(a) * directions_[static_cast<std::size_t>(a)];
  }
  return out;
}

TangentVector LocalChart::second_order(const RVector& u) const {
  require_length(*this, u);
  TangentVector out = TangentVector::zero(base_.dim(), base_.channels());
  if (!second_) return out;
  for (Index a = 0; a < size(); ++a) {
    for (Index b = 0; b < size(); ++b) {
      out += (0.5 * u(a) * u(b)) * second_->at(a, b);
    }
  }
  return out;
}

DynamicalParams LocalChart::point(const RVector& u) const {
  return displace(base_.params(), first_order(u) + second_order(u));
}

LocalChart linear_horizontal_chart(const DynamicalParams& base,
                                   std::span<const TangentVector> tangents,
                                   const Tolerances& tol) {
  const ErgodicDynamics dyn(base, tol);
  std::vector<TangentVector> dirs;
  dirs.reserve(tangents.size());
  for (const auto& t : tangents) dirs.push_back(horizontal_projection(dyn, t));
  return LocalChart(base, std::move(dirs), std::nullopt, tol);
}

Complex finite_overlap(const LocalChart& chart, const RVector& u,
                       const RVector& uprime, double t,
                       const std::optional<CVector>& phi) {
  require_length(chart, u);
  require_length(chart, uprime);
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "finite overlap needs t > 0", std::to_string(t));
  }
  const double scale = 1.0 / std::sqrt(t);
  const ErgodicDynamics d1 = checked_point(chart, scale * u, t);
  const ErgodicDynamics d2 = checked_point(chart, scale * uprime, t);
  const Superoperator w12 = offdiag_generator(d1.params(), d2.params());
  const Index dim = chart.base().dim();
  const CMatrix y = expm(w12, t).apply(CMatrix::Identity(dim, dim));
  CVector v = phi ? *phi : leading_stationary_vector(chart.base());
  if (v.size() != dim || v.norm() == 0.0) {
    throw Error(ErrorKind::kDimension, kModule,
                "initial vector has the wrong length or is zero");
  }
  v.normalize();
  return v.dot(y * v);
}

Complex limit_overlap(const LocalChart& chart, const RVector& u,
                      const RVector& uprime) {
  require_length(chart, u);
  require_length(chart, uprime);
  const ErgodicDynamics& dyn = chart.base();
  const DynamicalParams& d = dyn.params();
  const Expansion e = expand(chart, u, uprime);
  const CMatrix id = CMatrix::Identity(d.dim(), d.dim());
  const CMatrix l1_id = apply_l1(d, e, id);
  const CMatrix k = dyn.invert(dyn.center(l1_id));
  const Complex f =
      dyn.mean(apply_l2_half(d, e, id)) - dyn.mean(apply_l1(d, e, k));
  return std::exp(f);
}

Complex limit_overlap_closed_form(const LocalChart& chart, const RVector& u,
                                  const RVector& uprime) {
  const GaussianLimitModel& m = chart.model();
  const double phase = u.dot(m.S * u) - uprime.dot(m.S * uprime);
  return coherent_overlap(m, u, uprime) * std::exp(Complex(0.0, phase));
}

LanReport lan_convergence(const LocalChart& chart, const RVector& u,
                          const RVector& uprime,
                          std::span<const double> t_values,
                          const std::optional<CVector>& phi) {
  if (t_values.empty()) {
    throw Error(ErrorKind::kPrecondition, kModule, "empty t grid");
  }
  LanReport report;
  report.limit_value = limit_overlap(chart, u, uprime);
  report.closed_form_value = limit_overlap_closed_form(chart, u, uprime);
  report.phase_matrix_used = chart.model().S;
  double t_max = -1.0;
  for (double t : t_values) {
    const Complex value = finite_overlap(chart, u, uprime, t, phi);
    const double err = std::abs(value - report.limit_value);
    report.t_values.push_back(t);
    report.finite_overlaps.push_back(value);
    report.errors.push_back(err);
    if (t > t_max) {
      t_max = t;
      report.max_abs_error = err;
    }
  }
  return report;
}

double output_overlap_trace(const DynamicalParams& d1,
                            const DynamicalParams& d2, double t,
                            const Tolerances& tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "output overlap needs t >= 0", std::to_string(t));
  }
  const ErgodicDynamics e1(d1, tol);
  const ErgodicDynamics e2(d2, tol);
  Eigen::SelfAdjointEigenSolver<CMatrix> s1(e1.stationary());
  Eigen::SelfAdjointEigenSolver<CMatrix> s2(e2.stationary());
  const CMatrix& u1 = s1.eigenvectors();
  const CMatrix& u2 = s2.eigenvectors();
  const RVector& lam1 = s1.eigenvalues();
  const RVector& lam2 = s2.eigenvalues();

  const Superoperator evo =
      expm(offdiag_generator(e1.params(), e2.params()), t);
  const Index d = d1.dim();
  double total = 0.0;
  for (Index m = 0; m < d; ++m) {
    for (Index mp = 0; mp < d; ++mp) {
      const CMatrix x = u1.col(m) * u2.col(mp).adjoint();
      const CMatrix y = u1.adjoint() * evo.apply(x) * u2;
      for (Index n = 0; n < d; ++n) {
        for (Index np = 0; np < d; ++np) {
          total += lam1(n) * lam2(np) * std::norm(y(n, np));
        }
      }
    }
  }
  return total;
}

}  // namespace qmarkov
