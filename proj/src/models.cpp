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

#include "qmarkov/models.hpp"

#include <cmath>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "models";

void require_alpha(const TwoLevelParams& p) {
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw Error(ErrorKind::kPrecondition, kModule, "alpha must be positive",
                std::to_string(p.alpha));
  }
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TangentVector tv(const CMatrix& dh, const CMatrix& dl) {
  return TangentVector(dh, {dl});
}

}  // namespace

DynamicalParams two_level(const TwoLevelParams& p) {
  require_alpha(p);
  const auto [v0, v1, v2] = p.v;
  const CMatrix h =
      0.5 * mat2(p.delta, Complex(p.omega + v1, -v2),
                 Complex(p.omega + v1, v2), -p.delta + v0);
  const double a2 = p.alpha * p.alpha;
  const Complex pre = p.alpha * std::exp(Complex(0.0, p.theta));
  const CMatrix l = pre * mat2(Complex(-v2, v1) / a2, Complex(1.0, v0 / a2),
                               0.0, Complex(v2, -v1) / a2);
  return DynamicalParams(h, {l});
}

CMatrix two_level_generator(const CMatrix& rho, const Eigen::Vector3d& w) {
  CMatrix k = 0.5 * (w(0) * pauli_x() + w(1) * pauli_y() + w(2) * pauli_z());
  k -= (rho * k).trace() * CMatrix::Identity(2, 2);
  return re_part(k);
}

TwoLevelReference two_level_reference(const TwoLevelParams& p) {
  require_alpha(p);
  const double a = p.alpha;
  const double dl = p.delta;
  const double om = p.omega;
  const double a2 = a * a;
  const double a4 = a2 * a2;
  const double om2 = om * om;
  const double om4 = om2 * om2;
  const double dl2 = dl * dl;

  TwoLevelReference ref;
  const double g = a4 + 4.0 * dl2 + 2.0 * om2;
  ref.gamma = g;
  ref.xi = Complex(2.0 * dl, a2);
  const double xi2 = std::norm(ref.xi);
  const double g3 = g * g * g;

  ref.rho_ss = (1.0 / g) * mat2(g - om2, om * ref.xi, om * std::conj(ref.xi),
                                om2);

  ref.fisher[kDelta] = 2.0 * om2 * xi2 * (2.0 * a4 + om2) / (a2 * g3);
  ref.fisher[kOmega] =
      (a4 * a4 * a4 + a4 * a4 * (8.0 * dl2 + 6.0 * om2) +
       4.0 * a4 * (4.0 * dl2 * dl2 - 2.0 * dl2 * om2 + 3.0 * om4) +
       8.0 * om4 * om2) /
      (a2 * g3);
  ref.fisher[kAlpha] = om2 / g;
  ref.fisher[kTheta] =
      a2 * om2 * (-2.0 * om2 * (a4 - 12.0 * dl2) + xi2 * xi2 + 4.0 * om4) / g3;

  ref.connection_w[kDelta] =
      -Eigen::Vector3d(4.0 * dl * om, 2.0 * om * a2, xi2) / (g * a2);
  ref.connection_r[kDelta] = xi2 / (2.0 * g);
  ref.connection_w[kOmega] =
      -2.0 * Eigen::Vector3d(a4 + 2.0 * om2, -2.0 * dl * a2, 2.0 * dl * om) /
      (g * a2);
  ref.connection_r[kOmega] = 2.0 * dl * om / g;
  ref.connection_w[kAlpha] = Eigen::Vector3d::Zero();
  ref.connection_r[kAlpha] = 0.0;
  ref.connection_w[kTheta] =
      -Eigen::Vector3d(4.0 * dl * om, 2.0 * a2 * om, xi2) / g;
  ref.connection_r[kTheta] = -a2 * om2 / g;
  for (int i = 0; i < 4; ++i) {
    ref.connection_components[i] = {
        two_level_generator(ref.rho_ss, ref.connection_w[i]),
        ref.connection_r[i]};
  }

  ref.symplectic_F = {om2 / (a2 * g), a2 * g / om2, 2.0 * om4 / (a2 * g),
                      a2 * g / (2.0 * om4)};

  const double ga2 = g * g * a2;
  ref.projection_coordinates[kDelta] =
      Eigen::Vector4d(-4.0 * a4 * g * dl, 2.0 * a4 * om2, a4 * g,
                      4.0 * dl * om4) /
      ga2;
  ref.projection_coordinates[kOmega] =
      Eigen::Vector4d(-a4 * g * (g - 8.0 * dl2), -4.0 * a4 * dl * om2,
                      -2.0 * a4 * dl * g, 2.0 * om4 * (a4 + 2.0 * om2)) /
      (ga2 * om);
  ref.projection_coordinates[kAlpha] = Eigen::Vector4d(a, 0.0, 0.0, 0.0);
  ref.projection_coordinates[kTheta] =
      Eigen::Vector4d(-4.0 * g * a4 * dl, om2 * (2.0 * a4 - g), a4 * g,
                      4.0 * dl * om4) /
      (g * g);
  return ref;
}

TwoLevelTangents two_level_tangents(const TwoLevelParams& p) {
  require_alpha(p);
  const double a = p.alpha;
  const double a2 = a * a;
  const double dl = p.delta;
  const double om = p.omega;
  const double g = a2 * a2 + 4.0 * dl * dl + 2.0 * om * om;
  const Complex xi(2.0 * dl, a2);
  const Complex ph = std::exp(Complex(0.0, p.theta));
  const CMatrix id = CMatrix::Identity(2, 2);
  const CMatrix zero = CMatrix::Zero(2, 2);
  const CMatrix e01 = matrix_unit(2, 0, 1);
  const CMatrix e11 = matrix_unit(2, 1, 1);
  const CMatrix sx = pauli_x();
  const CMatrix sy = pauli_y();
  const CMatrix sz = pauli_z();

  const CMatrix block2 = mat2(-om, xi, 0.0, om);
  const double p1 = a2 * g / (om * om);
  const double p2 = a2 * g / (2.0 * om * om * om * om);

  return TwoLevelTangents{
      {tv(0.5 * sz, zero), tv(0.5 * sx, zero), tv(zero, ph * e01),
       tv(zero, a * kI * ph * e01)},
      {tv(-dl * sy, kI * a * ph * sz), tv(dl * sx - om * sz, -a * ph * sz),
       tv(om * sy, -2.0 * a * kI * ph * e01), tv(id, zero)},
      {tv(e11, kI * ph * e01 / a), tv(0.5 * sx, kI * ph * sz / a),
       tv(0.5 * sy, -ph * sz / a), tv(zero, ph * e01 / a)},
      {tv(zero, ph * e01 / a),
       tv(p1 * mat2(0.0, 0.0, 0.0, -1.0), p1 * ph / (kI * a) * e01),
       tv(mat2(0.0, -kI * om / 2.0, kI * om / 2.0, a2), ph / a * block2),
       tv(p2 * mat2(0.0, om / 2.0, om / 2.0, -2.0 * dl),
          p2 * ph / (kI * a) * block2)}};
}

std::array<OneParamPreset, 3> one_param_presets(const CMatrix& h,
                                                const CMatrix& l) {
  const DynamicalParams base(h, {l});
  const Index d = base.dim();
  const CMatrix zero = CMatrix::Zero(d, d);

  OneParamPreset phase{
      "phase",
      [h, l](double s) {
        return DynamicalParams(h, {std::exp(Complex(0.0, -s)) * l});
      },
      TangentVector(zero, {kI * l}),
      [l](const ErgodicDynamics& dyn) {
        const CMatrix a =
            l + commutator(l, dyn.invert(dyn.center(l.adjoint() * l)));
        return dyn.mean(a.adjoint() * a).real();
      }};

  OneParamPreset coupling{
      "coupling",
      [h, l](double s) { return DynamicalParams(h, {(1.0 + s) * l}); },
      TangentVector(zero, {l}),
      [l](const ErgodicDynamics& dyn) {
        return dyn.mean(l.adjoint() * l).real();
      }};

  OneParamPreset hamiltonian{
      "hamiltonian",
      [h, l](double s) { return DynamicalParams((1.0 + s) * h, {l}); },
      TangentVector(h, {zero}),
      [h, l](const ErgodicDynamics& dyn) {
        const CMatrix c = commutator(l, dyn.invert(dyn.center(h)));
        return dyn.mean(c.adjoint() * c).real();
      }};

  return {std::move(phase), std::move(coupling), std::move(hamiltonian)};
}

}  // namespace qmarkov
