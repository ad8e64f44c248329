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

#include "qmarkov/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "gaussian";

void require_identifiable(const ErgodicDynamics& dyn, const TangentVector& dd) {
  const double e = e_map(dyn.params(), dd).norm();
  if (e > dyn.tolerances().identifiable * std::max(1.0, dd.norm())) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "tangent vector is not identifiable",
                "|E(dD)| = " + std::to_string(e));
  }
}

TangentVector combine(std::span<const TangentVector> vectors,
                      const RVector& coeffs) {
  TangentVector out =
      TangentVector::zero(vectors.front().dim(), vectors.front().channels());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double c = coeffs(static_cast<Index>(i));
    if (c != 0.0) out += c * vectors[i];
  }
  return out;
}

// Rotate z so that its largest-modulus component is real positive.
CVector fix_phase(const CVector& z) {
  Index k = 0;
  z.cwiseAbs().maxCoeff(&k);
  return z * (std::conj(z(k)) / std::abs(z(k)));
}

}  // namespace

TangentVector complex_structure(const ErgodicDynamics& dyn,
                                const TangentVector& dd) {
  require_identifiable(dyn, dd);
  CMatrix acc = CMatrix::Zero(dyn.dim(), dyn.dim());
  std::vector<CMatrix> dl;
  dl.reserve(dd.channels());
  for (std::size_t i = 0; i < dd.channels(); ++i) {
    acc += dd.dl(i).adjoint() * dyn.params().jump(i);
    dl.push_back(kI * dd.dl(i));
  }
  return TangentVector(re_part(acc), std::move(dl));
}

double symplectic_form(const ErgodicDynamics& dyn, const TangentVector& a,
                       const TangentVector& b) {
  return tangent_covariance(dyn, a, b).imag();
}

CMatrix covariance_gram(const ErgodicDynamics& dyn,
                        std::span<const TangentVector> vectors) {
  const auto m = static_cast<Index>(vectors.size());
  std::vector<OperatorTuple> rx;
  rx.reserve(vectors.size());
  for (const auto& v : vectors) {
    rx.push_back(r_projection(dyn, x_map(dyn.params(), v)));
  }
  CMatrix g(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      Complex acc{};
      for (std::size_t i = 0; i < dyn.channels(); ++i) {
        acc += dyn.mean(rx[a].x(i).adjoint() * rx[b].x(i));
      }
      g(a, b) = acc;
      g(b, a) = std::conj(acc);
    }
  }
  return g;
}

GaussianLimitModel gaussian_model(const ErgodicDynamics& dyn,
                                  std::vector<TangentVector> directions,
                                  QfiConvention convention) {
  const CMatrix m = covariance_gram(dyn, directions);
  GaussianLimitModel model;
  model.dim_id = static_cast<Index>(directions.size());
  model.F = convention_factor(convention) * m.real();
  model.Sigma = m.imag();
  model.S = RMatrix::Zero(model.dim_id, model.dim_id);
  model.convention = convention;
  model.change_of_basis = RMatrix::Identity(model.dim_id, model.dim_id);
  model.basis = std::move(directions);
  return model;
}

GaussianLimitModel symplectic_basis(const ErgodicDynamics& dyn,
                                    std::span<const TangentVector> spanning,
                                    QfiConvention convention,
                                    bool complete_with_j) {
  if (spanning.empty()) {
    throw Error(ErrorKind::kPrecondition, kModule, "empty spanning set");
  }
  std::vector<TangentVector> inputs(spanning.begin(), spanning.end());
  for (const auto& v : inputs) require_identifiable(dyn, v);
  if (complete_with_j) {
    const std::size_t n0 = inputs.size();
    for (std::size_t i = 0; i < n0; ++i) {
      inputs.push_back(complex_structure(dyn, inputs[i]));
    }
  }

  const CMatrix gram = covariance_gram(dyn, inputs);
  Eigen::SelfAdjointEigenSolver<RMatrix> metric(gram.real());
  const RVector& mev = metric.eigenvalues();
  const double cutoff = 1e-9 * std::max(1.0, mev.maxCoeff());
  std::vector<Index> keep;
  for (Index i = 0; i < mev.size(); ++i) {
    if (mev(i) > cutoff) keep.push_back(i);
  }
  const auto rank = static_cast<Index>(keep.size());
  if (rank == 0) {
    throw Error(ErrorKind::kNumerical, kModule,
                "metric vanishes on the spanning set", "rank 0");
  }
  // Whitening: columns of B give a Re-orthonormal basis of the span.
  RMatrix whiten(static_cast<Index>(inputs.size()), rank);
  for (Index j = 0; j < rank; ++j) {
    whiten.col(j) = metric.eigenvectors().col(keep[j]) / std::sqrt(mev(keep[j]));
  }
  const RMatrix a = whiten.transpose() * gram.imag() * whiten;

  // i A is Hermitian; its eigenvalues come in pairs +-lambda.
  const CMatrix ia = kI * a.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> symp(ia);
  const RVector& sev = symp.eigenvalues();
  const double scut = 1e-9 * std::max(1.0, sev.cwiseAbs().maxCoeff());
  Index positive = 0;
  for (Index i = 0; i < sev.size(); ++i) {
    if (sev(i) > scut) ++positive;
  }
  if (2 * positive != rank) {
    std::ostringstream ctx;
    ctx << "metric rank " << rank << ", symplectic rank " << 2 * positive;
    throw Error(ErrorKind::kNumerical, kModule,
                "symplectic form is degenerate on the span", ctx.str());
  }

  RMatrix canon(rank, rank);
  for (Index p = 0; p < positive; ++p) {
    const Index col = sev.size() - 1 - p;
    const double lambda = sev(col);
    const CVector z = fix_phase(symp.eigenvectors().col(col));
    const RVector x = z.real().normalized();
    const RVector y = z.imag().normalized();
    canon.col(2 * p) = x / std::sqrt(lambda);
    canon.col(2 * p + 1) = y / std::sqrt(lambda);
  }
  const RMatrix coeffs = whiten * canon;

  std::vector<TangentVector> basis;
  basis.reserve(static_cast<std::size_t>(rank));
  for (Index j = 0; j < rank; ++j) {
    basis.push_back(combine(inputs, coeffs.col(j)));
  }
  GaussianLimitModel model = gaussian_model(dyn, std::move(basis), convention);
  model.change_of_basis = coeffs;
  Eigen::JacobiSVD<RMatrix> svd(coeffs);
  const RVector& sv = svd.singularValues();
  model.condition_number = sv(0) / sv(sv.size() - 1);
  return model;
}

Complex coherent_overlap(const GaussianLimitModel& model, const RVector& u,
                         const RVector& uprime) {
  if (u.size() != model.dim_id || uprime.size() != model.dim_id) {
    throw Error(ErrorKind::kDimension, kModule,
                "coherent overlap: vector length mismatch",
                std::to_string(u.size()) + ", " +
                    std::to_string(uprime.size()) + " vs " +
                    std::to_string(model.dim_id));
  }
  const RVector du = u - uprime;
  const double quad = du.dot(model.F * du);
  const double phase = u.dot(model.Sigma * uprime);
  return std::exp(Complex(-quad / 8.0, phase));
}

SecondDerivatives finite_difference_second_derivatives(const ChartMap& chart,
                                                       Index m, double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "finite-difference step must be positive");
  }
  const RVector zero = RVector::Zero(m);
  const DynamicalParams base = chart(zero);
  auto as_tangent = [&](const DynamicalParams& p, double c) {
    std::vector<CMatrix> dl;
    dl.reserve(p.channels());
    for (const auto& l : p.jumps()) dl.push_back(c * l);
    return TangentVector(c * p.hamiltonian(), std::move(dl));
  };
  auto eval = [&](const RVector& u, double c) {
    return as_tangent(chart(u), c);
  };

  SecondDerivatives out;
  out.size = m;
  out.entries.assign(static_cast<std::size_t>(m * m),
                     TangentVector::zero(base.dim(), base.channels()));
  const double h2 = step * step;
  for (Index a = 0; a < m; ++a) {
    RVector ea = RVector::Zero(m);
    ea(a) = step;
    TangentVector diag = eval(ea, 1.0 / h2) + eval(-ea, 1.0 / h2);
    diag -= as_tangent(base, 2.0 / h2);
    out.entries[static_cast<std::size_t>(a * m + a)] = diag;
    for (Index b = a + 1; b < m; ++b) {
      RVector eb = RVector::Zero(m);
      eb(b) = step;
      const double c = 1.0 / (4.0 * h2);
      TangentVector mixed = eval(ea + eb, c) + eval(-ea - eb, c);
      mixed -= eval(ea - eb, c);
      mixed -= eval(eb - ea, c);
      out.entries[static_cast<std::size_t>(a * m + b)] = mixed;
      out.entries[static_cast<std::size_t>(b * m + a)] = mixed;
    }
  }
  return out;
}

RMatrix phase_matrix(const ErgodicDynamics& dyn,
                     const SecondDerivatives& second) {
  const Index m = second.size;
  RMatrix s(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      const double v =
          0.5 * dyn.mean(e_map(dyn.params(), second.at(a, b))).real();
      s(a, b) = s(b, a) = v;
    }
  }
  return s;
}

RMatrix phase_matrix(const ErgodicDynamics& dyn, const ChartMap& chart,
                     Index m, double step) {
  return phase_matrix(dyn, finite_difference_second_derivatives(chart, m, step));
}

}  // namespace qmarkov
