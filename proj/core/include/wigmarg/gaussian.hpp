// Copyright 2026 The wigmarg Authors.
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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wigmarg/grid.hpp"
#include "wigmarg/wigner.hpp"

namespace wigmarg {

/// Covariance matrix of a centred Gaussian state.
///
/// Rows and columns are ordered (x_A, p_A, x_B, p_B): the n_a positions of A,
/// then the n_a momenta of A, then likewise for B. The Wigner distribution is
/// (2 pi)^{-n} (det Sigma)^{-1/2} exp(-z^T Sigma^{-1} z / 2).
struct CovarianceMatrix {
  Eigen::MatrixXd sigma;
  Partition partition;
  double hbar = 1.0;
};

/// Checks shape (2n x 2n with n = partition.dof()), finiteness and hbar > 0.
/// Physical admissibility is reported by validate_covariance, not enforced.
CovarianceMatrix make_covariance(Eigen::MatrixXd sigma, Partition partition, double hbar);

/// J = J_A ⊕ J_B, each block [[0, I], [-I, 0]] in (x, p) ordering.
struct SymplecticForm {
  Eigen::MatrixXd matrix;
};

SymplecticForm symplectic_form(const Partition& partition);

struct CovarianceReport {
  bool symmetric = false;
  double symmetry_defect = 0.0;  ///< max|Sigma - Sigma^T| / max|Sigma|
  bool positive_definite = false;
  double min_sigma_eigenvalue = 0.0;
  /// Smallest eigenvalue of the Hermitian matrix Sigma + (i hbar / 2) J.
  double min_uncertainty_eigenvalue = 0.0;
  /// Symmetric, positive definite, and the uncertainty eigenvalue is at
  /// least -1e-10 max|Sigma|.
  bool admissible = false;
};

CovarianceReport validate_covariance(const CovarianceMatrix& cov);

/// Throws InputError unless validate_covariance(cov).admissible.
void require_admissible(const CovarianceMatrix& cov);

/// Wigner value at z (ordered like Sigma), through a Cholesky solve. Throws
/// InputError for inadmissible or ill-conditioned (cond > 1e12) Sigma.
double gaussian_wigner_value(const CovarianceMatrix& cov, std::span<const double> z);

/// Samples the Gaussian Wigner distribution on the lattice. The grid must
/// reach 8 sqrt(max diag Sigma) from the origin on every position and
/// momentum axis.
WignerGrid sample_gaussian_wigner(const CovarianceMatrix& cov, const PhaseSpaceGrid& grid);

/// Tr(rho^2) = (hbar/2)^n (det Sigma)^{-1/2}.
double gaussian_purity(const CovarianceMatrix& cov);

/// The Sigma_AA block with partition (n_a, 0). The result is validated and
/// must be admissible.
CovarianceMatrix reduce_gaussian(const CovarianceMatrix& cov);

/// Symplectic eigenvalues nu_1 <= ... <= nu_n: the positive eigenvalues of
/// i J Sigma, obtained from the Hermitian matrix L^T (i J) L with Sigma = L L^T.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cov);

struct PurityDiagnostics {
  bool pure = false;
  std::vector<double> symplectic_spectrum;
  /// max_k |nu_k - hbar/2| / (hbar/2).
  double max_relative_deviation = 0.0;
};

/// Pure iff every symplectic eigenvalue equals hbar/2 within `tol` relative.
PurityDiagnostics is_pure(const CovarianceMatrix& cov, double tol = 1e-8);

/// Two-mode squeezed vacuum pairing mode k of A with mode k of B:
/// Sigma_AA = Sigma_BB = (hbar/2) cosh(2r) I, Sigma_AB = (hbar/2) sinh(2r) diag(I, -I).
CovarianceMatrix two_mode_squeezed(double r, int modes_per_side, double hbar);

}  // namespace wigmarg
