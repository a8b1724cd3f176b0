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

#include "wigmarg/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "wigmarg/error.hpp"

namespace wigmarg {

CovarianceMatrix make_covariance(Eigen::MatrixXd sigma, Partition partition, double hbar) {
  if (partition.n_a < 1 || partition.n_b < 0) throw InputError("invalid partition");
  const Eigen::Index dim = 2 * partition.dof();
  if (sigma.rows() != dim || sigma.cols() != dim) {
    throw InputError("covariance must be " + std::to_string(dim) + "x" + std::to_string(dim) +
                     " for partition (" + std::to_string(partition.n_a) + ", " +
                     std::to_string(partition.n_b) + ")");
  }
  if (!sigma.allFinite()) throw InputError("covariance has non-finite entries");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InputError("hbar must be positive");
  return CovarianceMatrix{std::move(sigma), partition, hbar};
}

SymplecticForm symplectic_form(const Partition& partition) {
  const Eigen::Index dim = 2 * partition.dof();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (int block : {partition.n_a, partition.n_b}) {
    for (int k = 0; k < block; ++k) {
      j(offset + k, offset + block + k) = 1.0;
      j(offset + block + k, offset + k) = -1.0;
    }
    offset += 2 * block;
  }
  return SymplecticForm{std::move(j)};
}

CovarianceReport validate_covariance(const CovarianceMatrix& cov) {
  const Eigen::Index dim = 2 * cov.partition.dof();
  if (cov.sigma.rows() != dim || cov.sigma.cols() != dim) {
    throw InputError("covariance dimension does not match its partition");
  }
  CovarianceReport r;
  const double smax = cov.sigma.cwiseAbs().maxCoeff();
  r.symmetry_defect = smax > 0.0 ? (cov.sigma - cov.sigma.transpose()).cwiseAbs().maxCoeff() / smax : 0.0;
  r.symmetric = r.symmetry_defect <= 1e-12;

  const Eigen::MatrixXd sym = 0.5 * (cov.sigma + cov.sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  r.min_sigma_eigenvalue = es.eigenvalues().minCoeff();
  r.positive_definite = r.min_sigma_eigenvalue > 0.0;

  const Eigen::MatrixXd& j = symplectic_form(cov.partition).matrix;
  const Eigen::MatrixXcd h =
      sym.cast<cplx>() + cplx(0.0, 0.5 * cov.hbar) * j.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h, Eigen::EigenvaluesOnly);
  r.min_uncertainty_eigenvalue = hs.eigenvalues().minCoeff();
  r.admissible = r.symmetric && r.positive_definite && r.min_uncertainty_eigenvalue >= -1e-10 * smax;
  return r;
}

void require_admissible(const CovarianceMatrix& cov) {
  const CovarianceReport r = validate_covariance(cov);
  if (!r.admissible) {
    throw InputError("covariance is not admissible (min eigenvalue of Sigma + i hbar J / 2 = " +
                     format_real(r.min_uncertainty_eigenvalue) + ")");
  }
}

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_cholesky(const CovarianceMatrix& cov) {
  require_admissible(cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.sigma, Eigen::EigenvaluesOnly);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  if (!(cond <= 1e12)) throw InputError("covariance is ill-conditioned (cond > 1e12)");
  Eigen::LLT<Eigen::MatrixXd> llt(cov.sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
  return llt;
}

double gaussian_prefactor(const Eigen::LLT<Eigen::MatrixXd>& llt, int n) {
  // sqrt(det Sigma) = prod diag(L).
  const double sqrt_det = llt.matrixL().toDenseMatrix().diagonal().prod();
  return 1.0 / (std::pow(2.0 * std::numbers::pi, n) * sqrt_det);
}

}  // namespace

double gaussian_wigner_value(const CovarianceMatrix& cov, std::span<const double> z) {
  const int n = cov.partition.dof();
  if (static_cast<int>(z.size()) != 2 * n) throw InputError("phase point has the wrong dimension");
  const auto llt = checked_cholesky(cov);
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(z.data(), 2 * n);
  const Eigen::VectorXd w = llt.matrixL().solve(v);
  return gaussian_prefactor(llt, n) * std::exp(-0.5 * w.squaredNorm());
}

WignerGrid sample_gaussian_wigner(const CovarianceMatrix& cov, const PhaseSpaceGrid& grid) {
  const int n = cov.partition.dof();
  if (grid.dof() != n) throw InputError("grid and covariance have different degrees of freedom");
  const auto llt = checked_cholesky(cov);

  const double reach = 8.0 * std::sqrt(cov.sigma.diagonal().maxCoeff());
  const double x_reach = std::min(-grid.x_min(), grid.x_max());
  const double p_reach = std::min(-grid.p_min(), grid.p_max());
  if (x_reach < reach || p_reach < reach) {
    throw InputError("grid is too narrow for this covariance: needs reach " + format_real(reach) +
                     ", has x " + format_real(x_reach) + ", p " + format_real(p_reach));
  }

  const double pref = gaussian_prefactor(llt, n);
  const Eigen::MatrixXd lower = llt.matrixL();
  std::optional<Partition> part;
  if (cov.partition.bipartite()) part = cov.partition;
  std::vector<double> values(grid.phase_size());
  std::vector<int> idx(2 * n);
  Eigen::VectorXd z(2 * n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    unflatten_index(i, grid.points(), idx);
    const std::vector<double> pt = phase_point(grid, idx, cov.partition);
    for (int a = 0; a < 2 * n; ++a) z[a] = pt[a];
    lower.triangularView<Eigen::Lower>().solveInPlace(z);
    values[i] = pref * std::exp(-0.5 * z.squaredNorm());
  }
  return WignerGrid(grid, std::move(values), part);
}

double gaussian_purity(const CovarianceMatrix& cov) {
  require_admissible(cov);
  const int n = cov.partition.dof();
  return std::pow(0.5 * cov.hbar, n) / std::sqrt(cov.sigma.determinant());
}

CovarianceMatrix reduce_gaussian(const CovarianceMatrix& cov) {
  require_admissible(cov);
  const int na = cov.partition.n_a;
  CovarianceMatrix out = make_covariance(cov.sigma.topLeftCorner(2 * na, 2 * na),
                                         Partition{na, 0}, cov.hbar);
  if (!validate_covariance(out).admissible) {
    throw NumericalError("reduced covariance is not admissible");
  }
  return out;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cov) {
  require_admissible(cov);
  const int n = cov.partition.dof();
  Eigen::LLT<Eigen::MatrixXd> llt(cov.sigma);
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::MatrixXd& j = symplectic_form(cov.partition).matrix;
  const Eigen::MatrixXcd h = cplx(0.0, 1.0) * (lower.transpose() * j * lower).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  // Eigenvalues come in ± pairs, ascending; the top n are the nu_k.
  std::vector<double> nu;
  for (int k = 0; k < n; ++k) nu.push_back(es.eigenvalues()[n + k]);
  return nu;
}

PurityDiagnostics is_pure(const CovarianceMatrix& cov, double tol) {
  PurityDiagnostics d;
  d.symplectic_spectrum = symplectic_eigenvalues(cov);
  const double vac = 0.5 * cov.hbar;
  for (double nu : d.symplectic_spectrum) {
    d.max_relative_deviation = std::max(d.max_relative_deviation, std::abs(nu - vac) / vac);
  }
  d.pure = d.max_relative_deviation <= tol;
  return d;
}

CovarianceMatrix two_mode_squeezed(double r, int modes_per_side, double hbar) {
  if (modes_per_side < 1) throw InputError("two-mode squeezing needs at least one mode per side");
  const int m = modes_per_side;
  const double c = 0.5 * hbar * std::cosh(2.0 * r);
  const double s = 0.5 * hbar * std::sinh(2.0 * r);
  Eigen::MatrixXd sigma = c * Eigen::MatrixXd::Identity(4 * m, 4 * m);
  for (int k = 0; k < m; ++k) {
    // x_A,k <-> x_B,k: +s ; p_A,k <-> p_B,k: -s
    sigma(k, 2 * m + k) = sigma(2 * m + k, k) = s;
    sigma(m + k, 3 * m + k) = sigma(3 * m + k, m + k) = -s;
  }
  return make_covariance(std::move(sigma), Partition{m, m}, hbar);
}

}  // namespace wigmarg
