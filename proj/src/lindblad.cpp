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

#include "qmarkov/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qmarkov {
namespace {

constexpr const char* kModule = "lindblad";

void require_compatible(const DynamicalParams& a, const DynamicalParams& b) {
  if (a.dim() != b.dim() || a.channels() != b.channels()) {
    std::ostringstream ctx;
    ctx << "d=" << a.dim() << ",k=" << a.channels() << " vs d=" << b.dim()
        << ",k=" << b.channels();
    throw Error(ErrorKind::kDimension, kModule,
                "dynamical parameters are not compatible", ctx.str());
  }
}

}  // namespace

DynamicalParams::DynamicalParams(CMatrix hamiltonian,
                                 std::vector<CMatrix> jumps,
                                 const Tolerances& tol)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  const Index d = hamiltonian_.rows();
  if (d < 1 || hamiltonian_.cols() != d) {
    throw Error(ErrorKind::kDimension, kModule, "H must be a square matrix");
  }
  if (!hamiltonian_.allFinite()) {
    throw Error(ErrorKind::kPrecondition, kModule, "H has non-finite entries");
  }
  const double skew = (hamiltonian_ - hamiltonian_.adjoint()).norm();
  if (skew >= tol.hermitian * (1.0 + hamiltonian_.norm())) {
    throw Error(ErrorKind::kPrecondition, kModule, "H is not Hermitian",
                "|H - H*| = " + std::to_string(skew));
  }
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (jumps_[i].rows() != d || jumps_[i].cols() != d) {
      throw Error(ErrorKind::kDimension, kModule,
                  "jump operator dimension mismatch", "L" + std::to_string(i));
    }
    if (!jumps_[i].allFinite()) {
      throw Error(ErrorKind::kPrecondition, kModule,
                  "jump operator has non-finite entries",
                  "L" + std::to_string(i));
    }
  }
}

CMatrix DynamicalParams::jump_weight() const {
  CMatrix w = CMatrix::Zero(dim(), dim());
  for (const auto& l : jumps_) w += l.adjoint() * l;
  return w;
}

Superoperator offdiag_generator(const DynamicalParams& d,
                                const DynamicalParams& dprime) {
  require_compatible(d, dprime);
  const CMatrix id = CMatrix::Identity(d.dim(), d.dim());
  Superoperator w = kI * (left_right_superop(d.hamiltonian(), id) -
                          left_right_superop(id, dprime.hamiltonian()));
  for (std::size_t i = 0; i < d.channels(); ++i) {
    const CMatrix& l = d.jump(i);
    const CMatrix& lp = dprime.jump(i);
    w += left_right_superop(l.adjoint(), lp);
    w -= Complex(0.5) * left_right_superop(l.adjoint() * l, id);
    w -= Complex(0.5) * left_right_superop(id, lp.adjoint() * lp);
  }
  return w;
}

Superoperator heisenberg_generator(const DynamicalParams& d) {
  return offdiag_generator(d, d);
}

Superoperator schrodinger_generator(const DynamicalParams& d) {
  const CMatrix id = CMatrix::Identity(d.dim(), d.dim());
  Superoperator w = -kI * (left_right_superop(d.hamiltonian(), id) -
                           left_right_superop(id, d.hamiltonian()));
  for (const auto& l : d.jumps()) {
    const CMatrix ll = l.adjoint() * l;
    w += left_right_superop(l, l.adjoint());
    w -= Complex(0.5) * left_right_superop(ll, id);
    w -= Complex(0.5) * left_right_superop(id, ll);
  }
  return w;
}

CMatrix apply_heisenberg(const DynamicalParams& d, const CMatrix& x) {
  CMatrix out = kI * commutator(d.hamiltonian(), x);
  for (const auto& l : d.jumps()) {
    out += l.adjoint() * x * l - 0.5 * anticommutator(l.adjoint() * l, x);
  }
  return out;
}

ErgodicityReport stationary_state(const DynamicalParams& d,
                                  const Tolerances& tol) {
  const Superoperator ws = schrodinger_generator(d);
  const auto pairs = eig(ws);
  ErgodicityReport report;
  report.rank_tol = tol.rank_factor * (1.0 + ws.norm());

  std::size_t nearest = 0;
  double gap_re = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const double mag = std::abs(pairs[n].value);
    if (mag < std::abs(pairs[nearest].value)) nearest = n;
    if (mag < report.rank_tol) {
      ++report.zero_eigen_count;
    } else {
      gap_re = std::max(gap_re, pairs[n].value.real());
    }
  }
  report.spectral_gap = -gap_re;

  const CMatrix& v = pairs[nearest].vector;
  const Complex trace = v.trace();
  if (std::abs(trace) > 1e-8 * v.norm()) {
    CMatrix rho = v / trace;
    rho = re_part(rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    report.min_stationary_eigenvalue = es.eigenvalues().minCoeff();
    report.stationary = std::move(rho);
  }
  report.ergodic = report.zero_eigen_count == 1 && report.stationary &&
                   report.min_stationary_eigenvalue > tol.full_rank;
  return report;
}

ErgodicDynamics::ErgodicDynamics(DynamicalParams d, const Tolerances& tol)
    : params_(std::move(d)),
      tol_(tol),
      generator_(heisenberg_generator(params_)),
      report_(stationary_state(params_, tol)) {
  if (!report_.ergodic) {
    std::ostringstream ctx;
    ctx << "zero eigenvalues " << report_.zero_eigen_count
        << ", min stationary eigenvalue " << report_.min_stationary_eigenvalue;
    throw Error(ErrorKind::kPrecondition, kModule,
                "dynamical parameters are not ergodic", ctx.str());
  }
  const Index n = params_.dim() * params_.dim();
  CMatrix augmented(n + 1, n);
  augmented.topRows(n) = generator_.matrix();
  augmented.row(n) = vectorize(stationary().transpose()).transpose();
  solver_ = std::make_shared<const Eigen::ColPivHouseholderQR<CMatrix>>(
      augmented);
}

Complex ErgodicDynamics::mean(const CMatrix& x) const {
  return (stationary() * x).trace();
}

CMatrix ErgodicDynamics::center(const CMatrix& x) const {
  return x - mean(x) * CMatrix::Identity(dim(), dim());
}

CMatrix ErgodicDynamics::invert(const CMatrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) {
    throw Error(ErrorKind::kDimension, kModule,
                "restricted inverse: operand dimension mismatch");
  }
  const Complex m = mean(x);
  if (std::abs(m) > tol_.residual * std::max(1.0, x.norm())) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "restricted inverse needs tr[rho_ss X] = 0",
                "|tr[rho_ss X]| = " + std::to_string(std::abs(m)));
  }
  const Index n = dim() * dim();
  CVector rhs(n + 1);
  rhs.head(n) = vectorize(x);
  rhs(n) = 0.0;
  return devectorize(solver_->solve(rhs), dim());
}

CMatrix ErgodicDynamics::evolve(double t, const CMatrix& x) const {
  return expm(generator_, t).apply(x);
}

CMatrix restricted_inverse(const DynamicalParams& d, const CMatrix& x,
                           const Tolerances& tol) {
  return ErgodicDynamics(d, tol).invert(x);
}

CMatrix semigroup_apply(const DynamicalParams& d, double t, const CMatrix& x) {
  return expm(heisenberg_generator(d), t).apply(x);
}

}  // namespace qmarkov
