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

#include "qmarkov/opspace.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qmarkov {
namespace {

constexpr const char* kModule = "opspace";

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorKind::kDimension, kModule,
                std::string(what) + ": dimension mismatch",
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

Index root_dim(Index n) {
  auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw Error(ErrorKind::kDimension, kModule,
                "superoperator size is not a perfect square",
                std::to_string(n));
  }
  return d;
}

}  // namespace

CVector vectorize(const CMatrix& x) {
  return Eigen::Map<const CVector>(x.data(), x.size());
}

CMatrix devectorize(const CVector& v, Index dim) {
  if (v.size() != dim * dim) {
    throw Error(ErrorKind::kDimension, kModule,
                "devectorize: length is not dim^2",
                std::to_string(v.size()) + " vs dim " + std::to_string(dim));
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  return a.conjugate().cwiseProduct(b).sum();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
  return a * b + b * a;
}

CMatrix re_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix im_part(const CMatrix& a) {
  return (a - a.adjoint()) / Complex(0.0, 2.0);
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

bool is_hermitian(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() < rel_tol * (1.0 + a.norm());
}

bool is_unitary(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.adjoint() * a - CMatrix::Identity(a.rows(), a.cols())).norm() <
         tol;
}

CMatrix matrix_unit(Index dim, Index i, Index j) {
  CMatrix e = CMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

CMatrix pauli_x() {
  CMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

CMatrix pauli_y() {
  CMatrix s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

CMatrix pauli_z() {
  CMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

Superoperator::Superoperator(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::kDimension, kModule, "superoperator must be square");
  }
  dim_ = root_dim(matrix_.rows());
  if (!matrix_.allFinite()) {
    throw Error(ErrorKind::kNumerical, kModule,
                "superoperator has non-finite entries");
  }
}

Superoperator Superoperator::identity(Index dim) {
  return Superoperator(CMatrix::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::zero(Index dim) {
  return Superoperator(CMatrix::Zero(dim * dim, dim * dim));
}

CMatrix Superoperator::apply(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorKind::kDimension, kModule,
                "apply: operand dimension mismatch",
                std::to_string(x.rows()) + " vs " + std::to_string(dim_));
  }
  return devectorize(matrix_ * vectorize(x), dim_);
}

Superoperator Superoperator::adjoint() const {
  return Superoperator(matrix_.adjoint());
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.dim_ != dim_) {
    throw Error(ErrorKind::kDimension, kModule, "sum of superoperators");
  }
  matrix_ += other.matrix_;
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& other) {
  if (other.dim_ != dim_) {
    throw Error(ErrorKind::kDimension, kModule,
                "difference of superoperators");
  }
  matrix_ -= other.matrix_;
  return *this;
}

Superoperator& Superoperator::operator*=(Complex c) {
  matrix_ *= c;
  return *this;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimension, kModule,
                "composition of superoperators");
  }
  return Superoperator(a.matrix() * b.matrix());
}

Superoperator left_right_superop(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "left_right_superop");
  return Superoperator(Eigen::kroneckerProduct(b.transpose(), a).eval());
}

CMatrix expm(const CMatrix& a, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::kPrecondition, kModule,
                "expm requires a finite t >= 0", std::to_string(t));
  }
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kDimension, kModule, "expm needs a square matrix");
  }
  if (t == 0.0) return CMatrix::Identity(a.rows(), a.cols());
  CMatrix scaled = a * t;
  CMatrix result = scaled.exp();
  if (!result.allFinite()) {
    throw Error(ErrorKind::kNumerical, kModule, "expm overflow",
                "t = " + std::to_string(t));
  }
  return result;
}

Superoperator expm(const Superoperator& s, double t) {
  return Superoperator(expm(s.matrix(), t));
}

std::vector<EigenPair> eig(const Superoperator& s, double tol) {
  Eigen::ComplexEigenSolver<CMatrix> solver(s.matrix(), true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, kModule,
                "eigensolver failed to converge");
  }
  const double bound = tol * std::max(1.0, s.norm());
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(s.matrix().rows()));
  for (Index n = 0; n < s.matrix().rows(); ++n) {
    CVector v = solver.eigenvectors().col(n);
    v.normalize();
    const Complex lambda = solver.eigenvalues()(n);
    const double residual = (s.matrix() * v - lambda * v).norm();
    if (residual > bound) {
      throw Error(ErrorKind::kNumerical, kModule, "eigenpair residual too large",
                  "residual " + std::to_string(residual));
    }
    out.push_back({lambda, devectorize(v, s.dim())});
  }
  return out;
}

std::vector<Complex> eigenvalues(const Superoperator& s) {
  Eigen::ComplexEigenSolver<CMatrix> solver(s.matrix(), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, kModule,
                "eigensolver failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace qmarkov
