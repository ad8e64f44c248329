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

#include <array>
#include <functional>
#include <string>

#include "qmarkov/covariance.hpp"

namespace qmarkov {

// Driven two-level atom with one emission channel, plus the auxiliary
// parameters v = (v0, v1, v2).
struct TwoLevelParams {
  double alpha = 1.0;
  double delta = 0.0;
  double omega = 1.0;
  double theta = 0.0;
  std::array<double, 3> v{0.0, 0.0, 0.0};
};

// Tangent directions are ordered (Delta, Omega, alpha, theta) throughout.
enum TwoLevelDirection { kDelta = 0, kOmega = 1, kAlpha = 2, kTheta = 3 };

struct TwoLevelReference {
  double gamma = 0.0;  // alpha^4 + 4 Delta^2 + 2 Omega^2
  Complex xi;          // 2 Delta + i alpha^2
  CMatrix rho_ss;
  std::array<double, 4> fisher{};  // metric convention
  // Connection components as (w, r) with generator K = f(w) id + w.sigma/2
  // centered against rho_ss.
  std::array<Eigen::Vector3d, 4> connection_w;
  std::array<double, 4> connection_r{};
  std::array<LieAlgebraElement, 4> connection_components;
  std::array<double, 4> symplectic_F{};
  // Coordinates of P(dD) in the basis (q1, p1, q2, p2).
  std::array<Eigen::Vector4d, 4> projection_coordinates;
};

struct TwoLevelTangents {
  std::array<TangentVector, 4> physical;    // Delta, Omega, alpha, theta
  std::array<TangentVector, 4> vertical;    // x, y, z, phase
  std::array<TangentVector, 4> auxiliary;   // v0, v1, v2, and (0, e^{i theta} E01 / alpha)
  std::array<TangentVector, 4> symplectic;  // q1, p1, q2, p2
};

DynamicalParams two_level(const TwoLevelParams& p);
TwoLevelReference two_level_reference(const TwoLevelParams& p);
TwoLevelTangents two_level_tangents(const TwoLevelParams& p);

// K = w.sigma / 2 centered against rho.
CMatrix two_level_generator(const CMatrix& rho, const Eigen::Vector3d& w);

// A one-parameter family through a base point (H, L) with its tangent and
// the closed-form metric-convention QFI rate.
struct OneParamPreset {
  std::string name;
  std::function<DynamicalParams(double)> family;
  TangentVector tangent;
  std::function<double(const ErgodicDynamics&)> closed_form;
};

// phase: (H, e^{-i s} L) with tangent (0, iL);
// coupling: (H, (1 + s) L) with tangent (0, L);
// hamiltonian: ((1 + s) H, L) with tangent (H, 0).
std::array<OneParamPreset, 3> one_param_presets(const CMatrix& h,
                                                const CMatrix& l);

}  // namespace qmarkov
