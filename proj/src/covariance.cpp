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

#include "qmarkov/covariance.hpp"

#include <cmath>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "covariance";

void require_match(const DynamicalParams& d, const OperatorTuple& x) {
  if (x.dim() != d.dim() || x.channels() != d.channels()) {
    throw Error(ErrorKind::kDimension, kModule,
                "operator tuple does not match dynamical parameters");
  }
}

void require_centered(const ErgodicDynamics& dyn, const CMatrix& x,
                      const char* name) {
  const double m = std::abs(dyn.mean(x));
  if (m > dyn.tolerances().residual * std::max(1.0, x.norm())) {
    throw Error(ErrorKind::kPrecondition, kModule,
                std::string(name) + " must satisfy tr[rho_ss X0] = 0",
                "|tr[rho_ss X0]| = " + std::to_string(m));
  }
}

// vec(Phi(B)) for Phi(B) = a * X0* B + b * sum X^i* [B, L^i].
Superoperator cross_map(const DynamicalParams& d, const OperatorTuple& x,
                        Complex a, Complex b) {
  const CMatrix id = CMatrix::Identity(d.dim(), d.dim());
  Superoperator phi = a * left_right_superop(x.x0().adjoint(), id);
  for (std::size_t i = 0; i < d.channels(); ++i) {
    const CMatrix xs = x.x(i).adjoint();
    phi += b * (left_right_superop(xs, d.jump(i)) -
                left_right_superop(xs * d.jump(i), id));
  }
  return phi;
}

}  // namespace

OperatorTuple::OperatorTuple(CMatrix x0, std::vector<CMatrix> xi)
    : x0_(std::move(x0)), xi_(std::move(xi)) {
  const Index d = x0_.rows();
  if (d < 1 || x0_.cols() != d) {
    throw Error(ErrorKind::kDimension, kModule, "X0 must be square");
  }
  if (!x0_.allFinite()) {
    throw Error(ErrorKind::kPrecondition, kModule, "X0 has non-finite entries");
  }
  for (const auto& m : xi_) {
    if (m.rows() != d || m.cols() != d) {
      throw Error(ErrorKind::kDimension, kModule, "X^i dimension mismatch");
    }
    if (!m.allFinite()) {
      throw Error(ErrorKind::kPrecondition, kModule,
                  "X^i has non-finite entries");
    }
  }
}

OperatorTuple OperatorTuple::zero(Index dim, std::size_t channels) {
  return OperatorTuple(CMatrix::Zero(dim, dim),
                       std::vector<CMatrix>(channels, CMatrix::Zero(dim, dim)));
}

double OperatorTuple::norm() const {
  double s = x0_.squaredNorm();
  for (const auto& m : xi_) s += m.squaredNorm();
  return std::sqrt(s);
}

OperatorTuple& OperatorTuple::operator+=(const OperatorTuple& other) {
  if (other.dim() != dim() || other.channels() != channels()) {
    throw Error(ErrorKind::kDimension, kModule, "tuple sum mismatch");
  }
  x0_ += other.x0_;
  for (std::size_t i = 0; i < xi_.size(); ++i) xi_[i] += other.xi_[i];
  return *this;
}

OperatorTuple& OperatorTuple::operator-=(const OperatorTuple& other) {
  if (other.dim() != dim() || other.channels() != channels()) {
    throw Error(ErrorKind::kDimension, kModule, "tuple difference mismatch");
  }
  x0_ -= other.x0_;
  for (std::size_t i = 0; i < xi_.size(); ++i) xi_[i] -= other.xi_[i];
  return *this;
}

OperatorTuple& OperatorTuple::operator*=(Complex c) {
  x0_ *= c;
  for (auto& m : xi_) m *= c;
  return *this;
}

std::string_view to_string(QfiConvention c) {
  return c == QfiConvention::kFourX ? "four_x" : "metric";
}

QfiConvention parse_convention(std::string_view text) {
  if (text == "four_x") return QfiConvention::kFourX;
  if (text == "metric") return QfiConvention::kMetric;
  throw Error(ErrorKind::kParse, kModule, "unknown QFI convention",
              std::string(text));
}

double convention_factor(QfiConvention c) {
  return c == QfiConvention::kFourX ? 4.0 : 1.0;
}

CMatrix centering(const ErgodicDynamics& dyn, const CMatrix& x0) {
  return dyn.center(x0);
}

OperatorTuple x_map(const DynamicalParams& d, const TangentVector& dd) {
  return OperatorTuple(e_map(d, dd), dd.dl());
}

OperatorTuple l_map(const DynamicalParams& d, const CMatrix& k) {
  std::vector<CMatrix> xi;
  xi.reserve(d.channels());
  for (const auto& l : d.jumps()) xi.push_back(kI * commutator(l, k));
  return OperatorTuple(apply_heisenberg(d, k), std::move(xi));
}

OperatorTuple r_projection(const ErgodicDynamics& dyn,
                           const OperatorTuple& x) {
  require_match(dyn.params(), x);
  const CMatrix c0 = dyn.center(x.x0());
  return OperatorTuple(c0, x.xi()) - l_map(dyn.params(), dyn.invert(c0));
}

Complex markov_covariance(const ErgodicDynamics& dyn, const OperatorTuple& x,
                          const OperatorTuple& y) {
  const OperatorTuple rx = r_projection(dyn, x);
  const OperatorTuple ry = r_projection(dyn, y);
  Complex acc{};
  for (std::size_t i = 0; i < rx.channels(); ++i) {
    acc += dyn.mean(rx.x(i).adjoint() * ry.x(i));
  }
  return acc;
}

Complex markov_covariance_expanded(const ErgodicDynamics& dyn,
                                   const OperatorTuple& x,
                                   const OperatorTuple& y) {
  require_match(dyn.params(), x);
  require_match(dyn.params(), y);
  const CMatrix a = dyn.invert(dyn.center(x.x0()));
  const CMatrix b = dyn.invert(dyn.center(y.x0()));
  CMatrix acc = -x.x0().adjoint() * b - a.adjoint() * y.x0();
  for (std::size_t i = 0; i < x.channels(); ++i) {
    const CMatrix& l = dyn.params().jump(i);
    acc += x.x(i).adjoint() * y.x(i);
    acc -= kI * x.x(i).adjoint() * commutator(l, b);
    acc += kI * commutator(a.adjoint(), l.adjoint()) * y.x(i);
  }
  return dyn.mean(acc);
}

CVector leading_stationary_vector(const ErgodicDynamics& dyn) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dyn.stationary());
  return es.eigenvectors().col(dyn.dim() - 1);
}

Complex finite_time_covariance(const ErgodicDynamics& dyn,
                               const OperatorTuple& x, const OperatorTuple& y,
                               double t, const FiniteTimeOptions& opts) {
  const DynamicalParams& d = dyn.params();
  require_match(d, x);
  require_match(d, y);
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "finite-time covariance needs t > 0", std::to_string(t));
  }
  if (opts.quad_steps < 4) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "quad_steps must be at least 4",
                std::to_string(opts.quad_steps));
  }
  require_centered(dyn, x.x0(), "X");
  require_centered(dyn, y.x0(), "Y");

  const int n_steps = opts.quad_steps + (opts.quad_steps % 2);
  const double h = t / n_steps;
  const Index dim = d.dim();
  const Index n = dim * dim;

  CVector phi = opts.initial ? *opts.initial : leading_stationary_vector(dyn);
  if (phi.size() != dim || phi.norm() == 0.0) {
    throw Error(ErrorKind::kDimension, kModule,
                "initial vector has the wrong length or is zero");
  }
  phi.normalize();
  // <phi|Z|phi> = r . vec(Z)
  const Eigen::RowVectorXcd r =
      vectorize(phi.conjugate() * phi.transpose()).transpose();

  // exp(h [[W, I], [0, 0]]) = [[T_h, C(h)], [0, I]], C(h) = int_0^h T_s ds.
  CMatrix aug = CMatrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = dyn.generator().matrix();
  aug.topRightCorner(n, n) = CMatrix::Identity(n, n);
  const CMatrix block = expm(aug, h);
  const CMatrix t_h = block.topLeftCorner(n, n);
  const CMatrix c_h = block.topRightCorner(n, n);

  // rc[m] = r C(m h), built from C((m+1)h) = C(mh) + T_{mh} C(h).
  std::vector<Eigen::RowVectorXcd> rc(static_cast<std::size_t>(n_steps) + 1);
  Eigen::RowVectorXcd rt = r;
  rc[0] = Eigen::RowVectorXcd::Zero(n);
  for (int m = 0; m < n_steps; ++m) {
    rc[m + 1] = rc[m] + rt * c_h;
    rt = rt * t_h;
  }

  CMatrix ito = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < d.channels(); ++i) {
    ito += x.x(i).adjoint() * y.x(i);
  }
  const Complex ito_term = rc[n_steps] * vectorize(ito);

  auto cross = [&](const OperatorTuple& left, const OperatorTuple& right) {
    Superoperator phi_map;
    Complex prefactor = 1.0;
    if (opts.cross_term == CrossTermForm::kDirect) {
      phi_map = cross_map(d, left, 1.0, -kI);
    } else {
      phi_map = cross_map(d, left, kI, 1.0);
      prefactor = -kI;
    }
    CVector v = prefactor * vectorize(right.x0());
    Complex sum{};
    for (int q = 0; q <= n_steps; ++q) {
      const double w = (q == 0 || q == n_steps) ? 1.0 : (q % 2 ? 4.0 : 2.0);
      const Complex g = rc[n_steps - q] * (phi_map.matrix() * v);
      sum += w * g;
      v = t_h * v;
    }
    return sum * (h / 3.0);
  };

  const Complex total =
      ito_term + cross(x, y) + std::conj(cross(y, x));
  return total / t;
}

Complex tangent_covariance(const ErgodicDynamics& dyn, const TangentVector& a,
                           const TangentVector& b) {
  return markov_covariance(dyn, x_map(dyn.params(), a),
                           x_map(dyn.params(), b));
}

QfiMatrix qfi_rate(const ErgodicDynamics& dyn,
                   std::span<const TangentVector> tangents,
                   QfiConvention convention) {
  const auto m = static_cast<Index>(tangents.size());
  std::vector<OperatorTuple> rx;
  rx.reserve(tangents.size());
  for (const auto& t : tangents) {
    rx.push_back(r_projection(dyn, x_map(dyn.params(), t)));
  }
  const double c = convention_factor(convention);
  RMatrix f(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      Complex acc{};
      for (std::size_t i = 0; i < dyn.channels(); ++i) {
        acc += dyn.mean(rx[a].x(i).adjoint() * rx[b].x(i));
      }
      f(a, b) = f(b, a) = c * acc.real();
    }
  }
  return {f, convention};
}

}  // namespace qmarkov
