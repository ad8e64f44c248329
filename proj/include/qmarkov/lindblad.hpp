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

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "qmarkov/opspace.hpp"

namespace qmarkov {

// D = (H, L^1, ..., L^k). H must be Hermitian within
// tol.hermitian * (1 + |H|); all matrices share the dimension d.
class DynamicalParams {
 public:
  DynamicalParams(CMatrix hamiltonian, std::vector<CMatrix> jumps,
                  const Tolerances& tol = {});

  Index dim() const { return hamiltonian_.rows(); }
  std::size_t channels() const { return jumps_.size(); }
  const CMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<CMatrix>& jumps() const { return jumps_; }
  const CMatrix& jump(std::size_t i) const { return jumps_.at(i); }

  // sum_i L^i* L^i
  CMatrix jump_weight() const;

 private:
  CMatrix hamiltonian_;
  std::vector<CMatrix> jumps_;
};

struct ErgodicityReport {
  bool ergodic = false;
  // Trace-one Hermitian fixed point of the Schrodinger generator closest to
  // the kernel. Set whenever a candidate could be normalized.
  std::optional<CMatrix> stationary;
  int zero_eigen_count = 0;
  double min_stationary_eigenvalue = 0.0;
  double spectral_gap = 0.0;
  double rank_tol = 0.0;
};

// W(X) = i[H, X] + sum_i (L^i* X L^i - 1/2 {L^i* L^i, X}).
Superoperator heisenberg_generator(const DynamicalParams& d);
// W_*(rho) = -i[H, rho] + sum_i (L^i rho L^i* - 1/2 {L^i* L^i, rho}).
Superoperator schrodinger_generator(const DynamicalParams& d);
// W_{D,D'}(X) = i(H X - X H') + sum_i [L^i* X L'^i
//               - 1/2 (L^i* L^i X + X L'^i* L'^i)].
Superoperator offdiag_generator(const DynamicalParams& d,
                                const DynamicalParams& dprime);

// Direct evaluation of W(X) without assembling the superoperator.
CMatrix apply_heisenberg(const DynamicalParams& d, const CMatrix& x);

ErgodicityReport stationary_state(const DynamicalParams& d,
                                  const Tolerances& tol = {});

// Cached analysis of an ergodic D: generator, stationary state, spectral
// gap and a factorization for the inverse on the zero-mean subspace.
// Construction throws ErrorKind::kPrecondition when D is not ergodic.
class ErgodicDynamics {
 public:
  explicit ErgodicDynamics(DynamicalParams d, const Tolerances& tol = {});

  const DynamicalParams& params() const { return params_; }
  const Tolerances& tolerances() const { return tol_; }
  const Superoperator& generator() const { return generator_; }
  const CMatrix& stationary() const { return *report_.stationary; }
  const ErgodicityReport& report() const { return report_; }
  double spectral_gap() const { return report_.spectral_gap; }
  Index dim() const { return params_.dim(); }
  std::size_t channels() const { return params_.channels(); }

  // tr[rho_ss X]
  Complex mean(const CMatrix& x) const;
  // X - tr[rho_ss X] id
  CMatrix center(const CMatrix& x) const;
  // W^{-1} on B_0. Rejects |tr[rho_ss X]| > tol.residual * max(1, |X|).
  CMatrix invert(const CMatrix& x) const;
  // T_t(X) = exp(t W)(X).
  CMatrix evolve(double t, const CMatrix& x) const;

 private:
  DynamicalParams params_;
  Tolerances tol_;
  Superoperator generator_;
  ErgodicityReport report_;
  std::shared_ptr<const Eigen::ColPivHouseholderQR<CMatrix>> solver_;
};

CMatrix restricted_inverse(const DynamicalParams& d, const CMatrix& x,
                           const Tolerances& tol = {});
CMatrix semigroup_apply(const DynamicalParams& d, double t, const CMatrix& x);

}  // namespace qmarkov
