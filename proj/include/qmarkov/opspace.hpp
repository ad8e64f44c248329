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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qmarkov/error.hpp"

namespace qmarkov {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Numerical thresholds shared by all modules. Every field can be overridden
// by callers; the CLI echoes the effective values in each report.
struct Tolerances {
  double residual = 1e-10;        // generic residual / zero-mean checks
  double rank_factor = 1e-9;      // zero eigenvalue: |lambda| < f (1 + |W|)
  double full_rank = 1e-10;       // min eigenvalue of the stationary state
  double equivalence_factor = 1e-8;
  double identifiable = 1e-8;     // |E(dD)| bound for horizontal vectors
  double proportionality = 1e-6;  // F*F proportional to id in witnesses
  double hermitian = 1e-12;       // relative Hermiticity check for H
};

// Column stacking: entry (i, j) lands at index j * d + i.
CVector vectorize(const CMatrix& x);
CMatrix devectorize(const CVector& v, Index dim);

// tr[A* B], conjugate-linear in the first slot.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);
// (A + A*) / 2 and (A - A*) / 2i.
CMatrix re_part(const CMatrix& a);
CMatrix im_part(const CMatrix& a);

double max_abs(const CMatrix& a);
bool all_finite(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double rel_tol);
bool is_unitary(const CMatrix& a, double tol);

// E_ij = |i><j|.
CMatrix matrix_unit(Index dim, Index i, Index j);

// Pauli matrices in the computational basis.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

// A linear map on d x d matrices held as its d^2 x d^2 matrix acting on
// column-stacked vectors.
class Superoperator {
 public:
  Superoperator() = default;
  explicit Superoperator(CMatrix matrix);

  static Superoperator identity(Index dim);
  static Superoperator zero(Index dim);

  Index dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

  CMatrix apply(const CMatrix& x) const;
  CVector apply_vec(const CVector& v) const { return matrix_ * v; }

  // Hilbert-Schmidt adjoint: hs_inner(S^dag(A), B) = hs_inner(A, S(B)).
  Superoperator adjoint() const;
  double norm() const { return matrix_.norm(); }

  Superoperator& operator+=(const Superoperator& other);
  Superoperator& operator-=(const Superoperator& other);
  Superoperator& operator*=(Complex c);

  friend Superoperator operator+(Superoperator a, const Superoperator& b) {
    return a += b;
  }
  friend Superoperator operator-(Superoperator a, const Superoperator& b) {
    return a -= b;
  }
  friend Superoperator operator*(Complex c, Superoperator a) { return a *= c; }
  // Composition: (a * b)(X) = a(b(X)).
  friend Superoperator operator*(const Superoperator& a,
                                 const Superoperator& b);

 private:
  Index dim_ = 0;
  CMatrix matrix_;
};

// X -> A X B, i.e. kron(B^T, A) in column-stacked form.
Superoperator left_right_superop(const CMatrix& a, const CMatrix& b);

// exp(t S) by scaling and squaring with a Pade approximant. t must be >= 0.
Superoperator expm(const Superoperator& s, double t);
// Same for a plain square matrix.
CMatrix expm(const CMatrix& a, double t);

struct EigenPair {
  Complex value;
  CMatrix vector;  // devectorized, unit Frobenius norm
};

// Full eigendecomposition via the complex Schur form. Every returned pair
// is checked for apply(S, V) = lambda V with residual below
// tol * max(1, |S|); a violation raises ErrorKind::kNumerical.
std::vector<EigenPair> eig(const Superoperator& s, double tol = 1e-10);
std::vector<Complex> eigenvalues(const Superoperator& s);

}  // namespace qmarkov
