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
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wigmarg/error.hpp"
#include "wigmarg/states.hpp"

namespace {

using namespace wigmarg;
using Eigen::MatrixXd;
constexpr double kPi = std::numbers::pi;

class GaussianHbar : public ::testing::TestWithParam<double> {};

// Textbook density of N(0, Sigma) through the explicit inverse.
double normal_density(const MatrixXd& sigma, const Eigen::VectorXd& z) {
  const double d = static_cast<double>(sigma.rows());
  return std::exp(-0.5 * z.dot(sigma.inverse() * z)) / std::sqrt(std::pow(2 * kPi, d) * sigma.determinant());
}

// Moduli of the eigenvalues of i J Sigma, each listed once, ascending.
std::vector<double> spectrum_oracle(const CovarianceMatrix& cov) {
  const MatrixXd m = symplectic_form(cov.partition).matrix * cov.sigma;
  Eigen::EigenSolver<MatrixXd> es(m);
  std::vector<double> mod;
  for (int i = 0; i < es.eigenvalues().size(); ++i) mod.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mod.begin(), mod.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < mod.size(); i += 2) out.push_back(0.5 * (mod[i] + mod[i + 1]));
  return out;
}

CovarianceMatrix vacuum(int n, double hbar, double scale = 1.0) {
  return make_covariance(scale * 0.5 * hbar * MatrixXd::Identity(2 * n, 2 * n), Partition{n, 0}, hbar);
}

TEST(SymplecticForm, Identities) {
  for (const Partition part : {Partition{1, 0}, Partition{1, 1}, Partition{2, 1}, Partition{2, 2}}) {
    const MatrixXd j = symplectic_form(part).matrix;
    const auto dim = 2 * part.dof();
    EXPECT_EQ((j * j + MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((j + j.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
  // (x_A, p_A, x_B, p_B) ordering.
  const MatrixXd j = symplectic_form(Partition{1, 1}).matrix;
  EXPECT_EQ(j(0, 1), 1.0);
  EXPECT_EQ(j(1, 0), -1.0);
  EXPECT_EQ(j(2, 3), 1.0);
  EXPECT_EQ(j(0, 2), 0.0);
}

TEST(Covariance, ConstructionRejectsBadInput) {
  EXPECT_THROW(make_covariance(MatrixXd::Identity(3, 3), Partition{1, 1}, 1.0), InputError);
  EXPECT_THROW(make_covariance(MatrixXd::Identity(2, 2), Partition{1, 0}, 0.0), InputError);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(make_covariance(bad, Partition{1, 0}, 1.0), InputError);
}

TEST_P(GaussianHbar, Admissibility) {
  const double hbar = GetParam();
  EXPECT_TRUE(validate_covariance(vacuum(1, hbar)).admissible);
  EXPECT_NEAR(validate_covariance(vacuum(1, hbar)).min_uncertainty_eigenvalue, 0.0, 1e-14 * hbar);
  const CovarianceReport sub = validate_covariance(vacuum(1, hbar, 0.98));
  EXPECT_FALSE(sub.admissible);
  EXPECT_TRUE(sub.positive_definite);
  EXPECT_NEAR(sub.min_uncertainty_eigenvalue, -0.01 * hbar, 1e-12);
  EXPECT_THROW(require_admissible(vacuum(1, hbar, 0.98)), InputError);
  EXPECT_TRUE(validate_covariance(vacuum(2, hbar, 1.5)).admissible);

  MatrixXd skew = 0.5 * hbar * MatrixXd::Identity(2, 2);
  skew(0, 1) = 0.1 * hbar;
  EXPECT_FALSE(validate_covariance(make_covariance(skew, Partition{1, 0}, hbar)).symmetric);
  // Squeezed vacuum saturates but stays admissible.
  MatrixXd sq(2, 2);
  sq << 0.5 * hbar * std::exp(-1.0), 0.0, 0.0, 0.5 * hbar * std::exp(1.0);
  EXPECT_TRUE(validate_covariance(make_covariance(sq, Partition{1, 0}, hbar)).admissible);
}

TEST(Covariance, ThermalMargin) {
  for (double nbar : {0.0, 0.5, 2.0}) {
    const CovarianceReport r = validate_covariance(vacuum(1, 1.0, 2 * nbar + 1));
    EXPECT_NEAR(r.min_uncertainty_eigenvalue, nbar, 1e-12);
  }
}

TEST_P(GaussianHbar, WignerValueMatchesTextbookDensity) {
  const double hbar = GetParam();
  Rng rng(41);
  for (const Partition part : {Partition{1, 0}, Partition{1, 1}, Partition{2, 1}}) {
    const CovarianceMatrix cov = random_covariance(part, hbar, rng);
    const int dim = 2 * part.dof();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd z(dim);
      for (int a = 0; a < dim; ++a) z[a] = rng.uniform(-1.0, 1.0) * std::sqrt(hbar);
      const std::vector<double> pt(z.data(), z.data() + dim);
      EXPECT_NEAR(gaussian_wigner_value(cov, pt) / normal_density(cov.sigma, z), 1.0, 1e-10);
    }
  }
  const std::vector<double> origin{0.0, 0.0};
  EXPECT_NEAR(gaussian_wigner_value(vacuum(1, hbar), origin), 1.0 / (kPi * hbar), 1e-14 / hbar);
}

TEST_P(GaussianHbar, LatticeSamplingNormalizesAndMatchesPackets) {
  const double hbar = GetParam();
  const PhaseSpaceGrid g = default_grid(1, 64, hbar);
  const WignerGrid w = sample_gaussian_wigner(vacuum(1, hbar), g);
  EXPECT_NEAR(w.integral(), 1.0, 1e-10);
  EXPECT_LE(oracle::max_abs_diff(w.values(), wigner_transform(ground_state(g)).values()), 1e-6 / hbar);

  const double s = 0.6 * std::sqrt(hbar);
  MatrixXd sq(2, 2);
  sq << s * s, 0.0, 0.0, hbar * hbar / (4 * s * s);
  const std::vector<double> zero{0.0}, width{s};
  const WignerGrid ws = sample_gaussian_wigner(make_covariance(sq, Partition{1, 0}, hbar), g);
  EXPECT_LE(oracle::max_abs_diff(ws.values(), wigner_transform(gaussian_wavepacket(g, zero, zero, width)).values()),
            1e-6 / hbar);
}

TEST_P(GaussianHbar, PurityFormulaAndLattice) {
  const double hbar = GetParam();
  for (double nbar : {0.0, 0.5, 2.0}) {
    EXPECT_NEAR(gaussian_purity(vacuum(1, hbar, 2 * nbar + 1)), 1.0 / (2 * nbar + 1), 1e-15);
  }
  const PhaseSpaceGrid g = default_grid(1, 64, hbar);
  for (double scale : {1.0, 1.5, 2.5}) {
    const CovarianceMatrix cov = vacuum(1, hbar, scale);
    const WignerGrid w = sample_gaussian_wigner(cov, g);
    double sq = 0.0;
    for (double v : w.values()) sq += v * v;
    EXPECT_NEAR(2 * kPi * hbar * sq * g.phase_cell_volume(), gaussian_purity(cov), 1e-4);
  }
  const CovarianceMatrix tms = two_mode_squeezed(0.5, 1, hbar);
  EXPECT_NEAR(gaussian_purity(tms), 1.0, 1e-12);
  EXPECT_NEAR(gaussian_purity(reduce_gaussian(tms)), 1.0 / std::cosh(1.0), 1e-12);
}

TEST_P(GaussianHbar, TwoModeSqueezedReduction) {
  const double hbar = GetParam();
  for (double r : {0.25, 0.5, 1.0}) {
    for (int m : {1, 2}) {
      const CovarianceMatrix tms = two_mode_squeezed(r, m, hbar);
      EXPECT_TRUE(validate_covariance(tms).admissible);
      EXPECT_TRUE(is_pure(tms).pure);
      const CovarianceMatrix red = reduce_gaussian(tms);
      EXPECT_EQ(red.partition.n_a, m);
      EXPECT_EQ(red.partition.n_b, 0);
      const MatrixXd expect = 0.5 * hbar * std::cosh(2 * r) * MatrixXd::Identity(2 * m, 2 * m);
      EXPECT_LE((red.sigma - expect).cwiseAbs().maxCoeff(), 1e-14 * hbar * std::cosh(2 * r));
      const PurityDiagnostics d = is_pure(red);
      EXPECT_FALSE(d.pure);
      for (double nu : d.symplectic_spectrum) EXPECT_NEAR(nu, 0.5 * hbar * std::cosh(2 * r), 1e-10 * hbar);
    }
  }
}

TEST_P(GaussianHbar, SymplecticSpectrumMatchesEigenOracle) {
  const double hbar = GetParam();
  Rng rng(42);
  for (const Partition part : {Partition{1, 1}, Partition{2, 1}, Partition{2, 2}}) {
    const MatrixXd s = random_symplectic(part, rng);
    const MatrixXd j = symplectic_form(part).matrix;
    EXPECT_LE((s.transpose() * j * s - j).cwiseAbs().maxCoeff(), 1e-10 * s.squaredNorm());

    const CovarianceMatrix pure = make_covariance(0.5 * hbar * s.transpose() * s, part, hbar);
    EXPECT_TRUE(is_pure(pure).pure);

    const CovarianceMatrix cov = random_covariance(part, hbar, rng);
    const std::vector<double> nu = symplectic_eigenvalues(cov), ref = spectrum_oracle(cov);
    ASSERT_EQ(nu.size(), ref.size());
    for (std::size_t k = 0; k < nu.size(); ++k) {
      EXPECT_NEAR(nu[k], ref[k], 1e-9 * ref.back());
      EXPECT_GE(nu[k], 0.5 * hbar * (1 - 1e-10));
    }
  }
  EXPECT_FALSE(is_pure(vacuum(2, hbar, 1.2)).pure);
  EXPECT_NEAR(is_pure(vacuum(2, hbar, 1.2)).max_relative_deviation, 0.2, 1e-12);
}

TEST(Reduction, IsExactTopLeftBlock) {
  Rng rng(43);
  for (const Partition part : {Partition{1, 1}, Partition{2, 1}, Partition{1, 2}}) {
    const CovarianceMatrix cov = random_covariance(part, 1.0, rng);
    const CovarianceMatrix red = reduce_gaussian(cov);
    const int da = 2 * part.n_a;
    EXPECT_EQ(red.sigma, cov.sigma.topLeftCorner(da, da));
    EXPECT_TRUE(validate_covariance(red).admissible);
  }
}

TEST(Reduction, PureProductGivesPureFactor) {
  MatrixXd sigma = MatrixXd::Zero(4, 4);
  sigma.diagonal() << 0.5 * std::exp(-0.6), 0.5 * std::exp(0.6), 0.9, 0.9;
  const CovarianceMatrix red = reduce_gaussian(make_covariance(sigma, Partition{1, 1}, 1.0));
  EXPECT_TRUE(is_pure(red).pure);
  EXPECT_NEAR(gaussian_purity(red), 1.0, 1e-14);
}

TEST_P(GaussianHbar, LatticeMarginalMatchesReducedCovariance) {
  const double hbar = GetParam();
  const PhaseSpaceGrid g = default_grid(2, 64, hbar);
  const Partition part{1, 1};
  MatrixXd mixed(4, 4);
  mixed << 0.8, 0.1, 0.2, 0.0,
           0.1, 0.7, 0.0, -0.15,
           0.2, 0.0, 0.6, 0.05,
           0.0, -0.15, 0.05, 0.75;
  for (const CovarianceMatrix& cov : {two_mode_squeezed(0.25, 1, hbar), make_covariance(hbar * mixed, part, hbar)}) {
    ASSERT_TRUE(validate_covariance(cov).admissible);
    const WignerGrid marginal = marginalize_b(sample_gaussian_wigner(cov, g), part);
    const WignerGrid reduced = sample_gaussian_wigner(reduce_gaussian(cov), g.with_dof(1));
    EXPECT_LE(oracle::max_abs_diff(marginal.values(), reduced.values()), 1e-6 * oracle::max_abs(reduced.values()));
  }
}

TEST(Sampling, RejectsNarrowGridsAndMismatches) {
  EXPECT_THROW(sample_gaussian_wigner(vacuum(1, 1.0, 40.0), default_grid(1, 32, 1.0)), InputError);
  EXPECT_THROW(sample_gaussian_wigner(vacuum(1, 1.0), default_grid(2, 16, 1.0)), InputError);
  MatrixXd ill(2, 2);
  ill << 1e7, 0.0, 0.0, 1e-6;
  EXPECT_THROW(sample_gaussian_wigner(make_covariance(ill, Partition{1, 0}, 1.0), default_grid(1, 16, 1.0)),
               InputError);
  EXPECT_THROW(gaussian_purity(vacuum(1, 1.0, 0.5)), InputError);
  EXPECT_THROW(two_mode_squeezed(0.5, 0, 1.0), InputError);
}

INSTANTIATE_TEST_SUITE_P(Hbar, GaussianHbar, ::testing::Values(0.5, 1.0, 2.0));

}  // namespace
