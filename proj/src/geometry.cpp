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

#include "qmarkov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "geometry";

void require_match(const DynamicalParams& d, const TangentVector& dd) {
  if (d.dim() != dd.dim() || d.channels() != dd.channels()) {
    throw Error(ErrorKind::kDimension, kModule,
                "tangent vector does not match dynamical parameters",
                "d=" + std::to_string(d.dim()) + ",k=" +
                    std::to_string(d.channels()) + " vs d=" +
                    std::to_string(dd.dim()) + ",k=" +
                    std::to_string(dd.channels()));
  }
}

}  // namespace

TangentVector::TangentVector(CMatrix dh, std::vector<CMatrix> dl,
                             const Tolerances& tol)
    : dh_(std::move(dh)), dl_(std::move(dl)) {
  const Index d = dh_.rows();
  if (d < 1 || dh_.cols() != d) {
    throw Error(ErrorKind::kDimension, kModule, "dH must be square");
  }
  if (!dh_.allFinite()) {
    throw Error(ErrorKind::kPrecondition, kModule, "dH has non-finite entries");
  }
  const double skew = (dh_ - dh_.adjoint()).norm();
  if (skew >= tol.hermitian * (1.0 + dh_.norm())) {
    throw Error(ErrorKind::kPrecondition, kModule, "dH is not Hermitian",
                "|dH - dH*| = " + std::to_string(skew));
  }
  for (const auto& l : dl_) {
    if (l.rows() != d || l.cols() != d) {
      throw Error(ErrorKind::kDimension, kModule, "dL dimension mismatch");
    }
    if (!l.allFinite()) {
      throw Error(ErrorKind::kPrecondition, kModule,
                  "dL has non-finite entries");
    }
  }
}

TangentVector TangentVector::zero(Index dim, std::size_t channels) {
  return TangentVector(CMatrix::Zero(dim, dim),
                       std::vector<CMatrix>(channels, CMatrix::Zero(dim, dim)));
}

double TangentVector::norm() const {
  double s = dh_.squaredNorm();
  for (const auto& l : dl_) s += l.squaredNorm();
  return std::sqrt(s);
}

TangentVector& TangentVector::operator+=(const TangentVector& other) {
  if (other.dim() != dim() || other.channels() != channels()) {
    throw Error(ErrorKind::kDimension, kModule, "tangent sum mismatch");
  }
  dh_ += other.dh_;
  for (std::size_t i = 0; i < dl_.size(); ++i) dl_[i] += other.dl_[i];
  return *this;
}

TangentVector& TangentVector::operator-=(const TangentVector& other) {
  if (other.dim() != dim() || other.channels() != channels()) {
    throw Error(ErrorKind::kDimension, kModule, "tangent difference mismatch");
  }
  dh_ -= other.dh_;
  for (std::size_t i = 0; i < dl_.size(); ++i) dl_[i] -= other.dl_[i];
  return *this;
}

TangentVector& TangentVector::operator*=(double c) {
  dh_ *= c;
  for (auto& l : dl_) l *= c;
  return *this;
}

DynamicalParams displace(const DynamicalParams& d, const TangentVector& dd,
                         double c) {
  require_match(d, dd);
  std::vector<CMatrix> jumps = d.jumps();
  for (std::size_t i = 0; i < jumps.size(); ++i) jumps[i] += c * dd.dl(i);
  CMatrix h = d.hamiltonian() + c * dd.dh();
  return DynamicalParams(re_part(h), std::move(jumps));
}

GaugeElement::GaugeElement(CMatrix w, double a, double tol)
    : unitary(std::move(w)), shift(a) {
  if (!is_unitary(unitary, tol)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "gauge element is not unitary",
                "|W*W - id| = " +
                    std::to_string((unitary.adjoint() * unitary -
                                    CMatrix::Identity(unitary.rows(),
                                                      unitary.cols()))
                                       .norm()));
  }
}

GaugeElement GaugeElement::identity(Index dim) {
  return GaugeElement(CMatrix::Identity(dim, dim), 0.0);
}

GaugeElement compose(const GaugeElement& g1, const GaugeElement& g2) {
  return GaugeElement(g2.unitary * g1.unitary, g1.shift + g2.shift);
}

LieAlgebraElement make_lie_element(const ErgodicDynamics& dyn, CMatrix k,
                                   double r) {
  if (!is_hermitian(k, 1e-10)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "Lie algebra generator K is not Hermitian");
  }
  return {re_part(dyn.center(k)), r};
}

DynamicalParams gauge_apply(const GaugeElement& g, const DynamicalParams& d) {
  const CMatrix& w = g.unitary;
  if (w.rows() != d.dim()) {
    throw Error(ErrorKind::kDimension, kModule,
                "gauge element dimension mismatch");
  }
  CMatrix h = w.adjoint() * d.hamiltonian() * w +
              g.shift * CMatrix::Identity(d.dim(), d.dim());
  std::vector<CMatrix> jumps;
  jumps.reserve(d.channels());
  for (const auto& l : d.jumps()) jumps.push_back(w.adjoint() * l * w);
  return DynamicalParams(re_part(h), std::move(jumps));
}

TangentVector gauge_pushforward(const GaugeElement& g,
                                const TangentVector& dd) {
  const CMatrix& w = g.unitary;
  std::vector<CMatrix> dl;
  dl.reserve(dd.channels());
  for (const auto& l : dd.dl()) dl.push_back(w.adjoint() * l * w);
  return TangentVector(re_part(w.adjoint() * dd.dh() * w), std::move(dl));
}

TangentVector lie_pushforward(const DynamicalParams& d,
                              const LieAlgebraElement& x) {
  const CMatrix& k = x.generator;
  CMatrix dh = kI * commutator(d.hamiltonian(), k) +
               x.shift * CMatrix::Identity(d.dim(), d.dim());
  std::vector<CMatrix> dl;
  dl.reserve(d.channels());
  for (const auto& l : d.jumps()) dl.push_back(kI * commutator(l, k));
  return TangentVector(re_part(dh), std::move(dl));
}

CMatrix e_map(const DynamicalParams& d, const TangentVector& dd) {
  require_match(d, dd);
  CMatrix acc = CMatrix::Zero(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.channels(); ++i) {
    acc += dd.dl(i).adjoint() * d.jump(i);
  }
  return dd.dh() + im_part(acc);
}

CMatrix e0_map(const ErgodicDynamics& dyn, const TangentVector& dd) {
  return dyn.center(e_map(dyn.params(), dd));
}

LieAlgebraElement connection_form(const ErgodicDynamics& dyn,
                                  const TangentVector& dd) {
  const CMatrix e = e_map(dyn.params(), dd);
  const double r = dyn.mean(e).real();
  const CMatrix e0 = e - r * CMatrix::Identity(dyn.dim(), dyn.dim());
  return {re_part(dyn.invert(e0)), r};
}

TangentVector horizontal_projection(const ErgodicDynamics& dyn,
                                    const TangentVector& dd) {
  return dd - lie_pushforward(dyn.params(), connection_form(dyn, dd));
}

std::vector<CMatrix> gell_mann_basis(Index dim) {
  std::vector<CMatrix> basis;
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      basis.push_back(matrix_unit(dim, j, k) + matrix_unit(dim, k, j));
      basis.push_back(-kI * (matrix_unit(dim, j, k) - matrix_unit(dim, k, j)));
    }
  }
  for (Index l = 1; l < dim; ++l) {
    CMatrix m = CMatrix::Zero(dim, dim);
    for (Index j = 0; j < l; ++j) m(j, j) = 1.0;
    m(l, l) = -static_cast<double>(l);
    basis.push_back(m * std::sqrt(2.0 / static_cast<double>(l * (l + 1))));
  }
  return basis;
}

std::vector<TangentVector> vertical_basis(const ErgodicDynamics& dyn) {
  std::vector<TangentVector> out;
  for (const auto& g : gell_mann_basis(dyn.dim())) {
    out.push_back(lie_pushforward(dyn.params(), make_lie_element(dyn, g, 0.0)));
  }
  out.push_back(lie_pushforward(
      dyn.params(), {CMatrix::Zero(dyn.dim(), dyn.dim()), 1.0}));
  return out;
}

CMatrix normalize_projective(const CMatrix& w) {
  Index bi = 0;
  const double diag_max = w.diagonal().cwiseAbs().maxCoeff(&bi);
  Complex pivot;
  if (diag_max > 1e-8 * std::max(1.0, w.norm())) {
    pivot = w(bi, bi);
  } else {
    Index r = 0;
    Index c = 0;
    w.cwiseAbs().maxCoeff(&r, &c);
    pivot = w(r, c);
  }
  if (std::abs(pivot) == 0.0) return w;
  return w * (std::conj(pivot) / std::abs(pivot));
}

double projective_distance(const CMatrix& a, const CMatrix& b) {
  const Complex overlap = hs_inner(b, a);
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a - phase * b).norm();
}

EquivalenceWitness find_gauge_equivalence(const DynamicalParams& d1,
                                          const DynamicalParams& d2,
                                          const Tolerances& tol) {
  const Superoperator w12 = offdiag_generator(d1, d2);
  const auto pairs = eig(w12);
  const auto lead = std::max_element(
      pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        return a.value.real() < b.value.real();
      });

  EquivalenceWitness out;
  out.eigenvalue = lead->value;
  out.eigen_real_part = lead->value.real();
  out.threshold = tol.equivalence_factor * (1.0 + w12.norm());
  if (std::abs(out.eigen_real_part) >= out.threshold) return out;

  const Index d = d1.dim();
  const CMatrix& f = lead->vector;
  const CMatrix ff = f.adjoint() * f;
  const double scale = ff.trace().real() / static_cast<double>(d);
  out.proportionality_residual =
      (ff - scale * CMatrix::Identity(d, d)).norm() / ff.norm();
  if (out.proportionality_residual > tol.proportionality) return out;

  out.unitary = normalize_projective(f / std::sqrt(scale));
  out.shift = lead->value.imag();
  out.found = true;
  return out;
}

}  // namespace qmarkov
