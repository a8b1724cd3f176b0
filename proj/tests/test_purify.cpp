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

#include "wigmarg/purify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wigmarg/error.hpp"
#include "wigmarg/states.hpp"

namespace {

using namespace wigmarg;
using Eigen::MatrixXcd;

class PurifyHbar : public ::testing::TestWithParam<double> {};

MatrixXcd reduced_by_loop(const Purification& p) {
  const PhaseSpaceGrid& ga = p.a_vectors.front().grid();
  const MatrixXcd k = p.psi.amplitudes() * p.psi.amplitudes().adjoint();
  return oracle::partial_trace(k, ga.position_size(), p.b_vectors.front().grid().position_size(),
                               p.b_vectors.front().grid().cell_volume());
}

TEST_P(PurifyHbar, RecoversStateAndWignerSum) {
  const double hbar = GetParam();
  const PhaseSpaceGrid g = default_grid(1, 32, hbar);
  Rng rng(51);
  for (std::size_t rank : {1u, 2u, 4u}) {
    const DensityMatrix rho = random_mixed(g, rank, rng);
    const Purification p = purify(rho, g);
    EXPECT_EQ(p.weights.size(), rank);
    EXPECT_NEAR(p.psi.norm(), 1.0, 1e-10);
    EXPECT_LE((reduced_by_loop(p) - rho.kernel()).cwiseAbs().maxCoeff(), 1e-8 * oracle::max_abs(rho.kernel()));

    // Marginal of W_psi against the Wigner function of rho computed directly.
    const WignerGrid lhs = marginalize_b(wigner_transform(p.psi), p.partition);
    const WignerGrid direct = wigner_of_density(rho);
    EXPECT_LE(oracle::max_abs_diff(lhs.values(), direct.values()), 1e-6 * oracle::max_abs(direct.values()));
    const WigsumReport r = verify_wigsum(p);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.max_residual, 1e-10 * r.max_rhs);
  }
}

TEST(Purify, SchmidtWeightsMatchGramSpectrum) {
  const PhaseSpaceGrid g = default_grid(1, 24, 1.0);
  Rng rng(52);
  const DensityMatrix rho = random_mixed(g, 3, rng);
  const Purification p = purify(rho, g);
  std::vector<double> w = schmidt_weights(p.psi, p.partition);
  std::sort(w.rbegin(), w.rend());
  // Oracle: eigenvalues of the loop partial trace, in units of the A cell.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(reduced_by_loop(p) * g.cell_volume());
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(w[j], p.weights[j], 1e-10);
    EXPECT_NEAR(w[j], es.eigenvalues()[es.eigenvalues().size() - 1 - static_cast<Eigen::Index>(j)], 1e-10);
  }
  for (std::size_t j = 3; j < w.size(); ++j) EXPECT_LE(w[j], 1e-12);
}

TEST(Purify, VectorsAreOrthonormal) {
  const PhaseSpaceGrid g = default_grid(2, 12, 1.0);
  Rng rng(53);
  const Purification p = purify(random_mixed(g, 3, rng), g);
  EXPECT_LE(gram_defect(p.a_vectors), 1e-10);
  EXPECT_LE(gram_defect(p.b_vectors), 1e-10);
  EXPECT_EQ(p.partition.n_a, 2);
  EXPECT_EQ(p.partition.n_b, 2);
}

TEST(Purify, DifferentEnvironmentsGiveSameReduction) {
  const PhaseSpaceGrid g = default_grid(1, 32, 1.0);
  Rng rng(54);
  const DensityMatrix rho = random_mixed(g, 3, rng);
  const Purification a = purify(rho, g);
  const Purification b = purify(rho, g, LadderFamily{0.8, 0.5});
  EXPECT_GT((a.psi.amplitudes() - b.psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LE((reduced_by_loop(a) - reduced_by_loop(b)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE(verify_wigsum(b).passed);
}

TEST(Purify, RephasedSchmidtVectors) {
  const PhaseSpaceGrid g = default_grid(1, 32, 1.0);
  Rng rng(55);
  const DensityMatrix rho = random_mixed(g, 2, rng);
  const Purification p = purify(rho, g);
  std::vector<WaveFunction> a = p.a_vectors;
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = WaveFunction(g, std::polar(1.0, 0.7 + 1.3 * static_cast<double>(j)) * a[j].amplitudes());
  }
  const Purification q = assemble_purification(p.weights, a, p.b_vectors);
  EXPECT_LE((reduced_by_loop(q) - rho.kernel()).cwiseAbs().maxCoeff(), 1e-8 * oracle::max_abs(rho.kernel()));
  EXPECT_TRUE(verify_wigsum(q).passed);
}

TEST(Purify, PureStateGivesProduct) {
  const PhaseSpaceGrid g = default_grid(1, 32, 1.0);
  Rng rng(56);
  const WaveFunction psi = random_packet(g, rng);
  const Purification p = purify(pure_density(psi), g);
  ASSERT_EQ(p.weights.size(), 1u);
  EXPECT_NEAR(p.weights[0], 1.0, 1e-10);
  EXPECT_NEAR(std::abs(inner_product(p.a_vectors[0], psi)), 1.0, 1e-10);
  const std::vector<double> w = schmidt_weights(p.psi, p.partition);
  EXPECT_NEAR(*std::max_element(w.begin(), w.end()), 1.0, 1e-10);
}

TEST(Purify, EqualWeightsAreHandled) {
  const PhaseSpaceGrid g = default_grid(1, 32, 1.0);
  const auto v = orthonormal_family(g, 3, LadderFamily{1.1, 0.2});
  const DensityMatrix rho = assemble_density({{1.0 / 3, 1.0 / 3, 1.0 / 3}, v, 0.0});
  const Purification p = purify(rho, g);
  EXPECT_EQ(p.weights.size(), 3u);
  for (double w : p.weights) EXPECT_NEAR(w, 1.0 / 3, 1e-10);
  EXPECT_LE((reduced_by_loop(p) - rho.kernel()).cwiseAbs().maxCoeff(), 1e-8 * oracle::max_abs(rho.kernel()));
}

TEST(Purify, AssemblyValidation) {
  const PhaseSpaceGrid g = default_grid(1, 16, 1.0);
  const auto v = orthonormal_family(g, 2);
  EXPECT_THROW(assemble_purification({0.5, 0.4}, v, v), InputError);
  EXPECT_THROW(assemble_purification({1.2, -0.2}, v, v), InputError);
  EXPECT_THROW(assemble_purification({1.0}, v, v), InputError);
  EXPECT_THROW(assemble_purification({0.5, 0.5}, v, {v[0], v[0]}), InputError);
  EXPECT_THROW(assemble_purification({0.5, 0.5}, v, orthonormal_family(default_grid(1, 16, 2.0), 2)), InputError);
  EXPECT_THROW(purify(pure_density(v[0]), default_grid(1, 16, 1.0, 8.0)), InputError);
  EXPECT_THROW(orthonormal_family(g, 17), InputError);
  EXPECT_THROW(orthonormal_family(g, 2, LadderFamily{0.0, 0.0}), InputError);
}

TEST(Purify, SchmidtWeightsRequireConsistentPartition) {
  const PhaseSpaceGrid g = default_grid(2, 12, 1.0);
  Rng rng(57);
  const WaveFunction psi = schmidt_state(g, Partition{1, 1}, {0.75, 0.25}, rng);
  std::vector<double> w = schmidt_weights(psi, Partition{1, 1});
  std::sort(w.rbegin(), w.rend());
  EXPECT_NEAR(w[0], 0.75, 1e-10);
  EXPECT_NEAR(w[1], 0.25, 1e-10);
  EXPECT_THROW(schmidt_weights(psi, Partition{2, 1}), InputError);
  EXPECT_THROW(schmidt_weights(psi, Partition{2, 0}), InputError);
}

INSTANTIATE_TEST_SUITE_P(Hbar, PurifyHbar, ::testing::Values(0.5, 1.0, 2.0));

}  // namespace
