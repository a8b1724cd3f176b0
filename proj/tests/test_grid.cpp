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

#include "wigmarg/grid.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "wigmarg/error.hpp"

namespace {

using namespace wigmarg;

TEST(Grid, SpacingFromBounds) {
  const PhaseSpaceGrid g = make_grid(1, 64, -8, 8, 1.0);
  EXPECT_DOUBLE_EQ(g.dx(), 0.25);
  EXPECT_NEAR(g.dp(), 2 * std::numbers::pi / 16, 1e-15);
  EXPECT_DOUBLE_EQ(make_grid(2, 32, -10, 10, 1.0).dx(), 0.625);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(make_grid(1, 7, -8, 8, 1.0), InputError);
  EXPECT_THROW(make_grid(1, 6, -8, 8, 1.0), InputError);
  EXPECT_THROW(make_grid(1, 64, 8, 8, 1.0), InputError);
  EXPECT_THROW(make_grid(1, 64, 8, -8, 1.0), InputError);
  EXPECT_THROW(make_grid(1, 64, -8, 8, 0.0), InputError);
  EXPECT_THROW(make_grid(1, 64, -8, 8, -1.0), InputError);
  EXPECT_THROW(make_grid(0, 64, -8, 8, 1.0), InputError);
  EXPECT_THROW(make_grid(1, 64, -8, NAN, 1.0), InputError);
}

TEST(Grid, FftDualityForManyShapes) {
  for (double hbar : {0.5, 1.0, 2.0, 0.01}) {
    for (int n : {8, 10, 32, 96}) {
      const PhaseSpaceGrid g = make_grid(1, n, -3.7, 11.2, hbar);
      EXPECT_NEAR(g.dx() * g.dp() * n, 2 * std::numbers::pi * hbar, 1e-15 * 2 * std::numbers::pi * hbar);
    }
  }
}

TEST(Grid, CellSumIsDomainVolume) {
  for (int n : {1, 2, 3}) {
    const PhaseSpaceGrid g = make_grid(n, 16, -2.5, 4.0, 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.position_size(); ++i) sum += g.cell_volume();
    EXPECT_NEAR(sum, std::pow(6.5, n), 1e-12 * std::pow(6.5, n));
  }
}

TEST(Grid, MomentumLatticeIsCentredAndHalfOpen) {
  const PhaseSpaceGrid g = make_grid(1, 64, -8, 8, 1.0);
  EXPECT_DOUBLE_EQ(g.p(32), 0.0);
  EXPECT_DOUBLE_EQ(g.p_min(), -32 * g.dp());
  EXPECT_DOUBLE_EQ(g.p_max(), 31 * g.dp());
  for (int k = 1; k < 64; ++k) EXPECT_GT(g.p(k), g.p(k - 1));
}

TEST(Grid, PhasePointCorner) {
  const PhaseSpaceGrid g = make_grid(1, 64, -8, 8, 1.0);
  const std::vector<int> idx{0, 0};
  const auto z = phase_point(g, idx);
  EXPECT_DOUBLE_EQ(z[0], -8.0);
  EXPECT_NEAR(z[1], -2 * std::numbers::pi * 32 / 16, 1e-14);
}

TEST(Grid, PhasePointCentreIsOrigin) {
  const PhaseSpaceGrid g = make_grid(2, 32, -5, 5, 1.0);
  const std::vector<int> idx{16, 16, 16, 16};
  for (double v : phase_point(g, idx)) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Grid, PhasePointPartitionOrdering) {
  const PhaseSpaceGrid g = make_grid(3, 8, 0, 8, 1.0);
  const std::vector<int> idx{1, 2, 3, 4, 5, 6};
  const auto plain = phase_point(g, idx);
  const auto split = phase_point(g, idx, Partition{1, 2});
  // (x1 x2 x3 p1 p2 p3) becomes (x1 p1 x2 x3 p2 p3).
  const std::vector<int> order{0, 3, 1, 2, 4, 5};
  for (int a = 0; a < 6; ++a) EXPECT_DOUBLE_EQ(split[a], plain[order[a]]);
  EXPECT_DOUBLE_EQ(plain[0], 1.0);
  EXPECT_DOUBLE_EQ(plain[3], (4 - 4) * g.dp());
}

TEST(Grid, PhasePointRejectsOutOfRange) {
  const PhaseSpaceGrid g = make_grid(1, 64, -8, 8, 1.0);
  const std::vector<int> past{64, 0};
  const std::vector<int> negative{0, -1};
  const std::vector<int> short_idx{3};
  EXPECT_THROW(phase_point(g, past), InputError);
  EXPECT_THROW(phase_point(g, negative), InputError);
  EXPECT_THROW(phase_point(g, short_idx), InputError);
  const std::vector<int> ok{0, 0};
  EXPECT_THROW(phase_point(g, ok, Partition{1, 1}), InputError);
}

TEST(Grid, FlatIndexRoundTrip) {
  std::vector<int> idx(3);
  for (std::size_t f = 0; f < 512; ++f) {
    unflatten_index(f, 8, idx);
    EXPECT_EQ(flat_index(idx, 8), f);
  }
  const std::vector<int> last{7, 7, 1};
  EXPECT_EQ(flat_index(last, 8), 7u * 64 + 7 * 8 + 1);
}

TEST(Grid, PartitionRules) {
  EXPECT_TRUE(make_partition(1, 1).bipartite());
  EXPECT_FALSE(make_partition(2, 0).bipartite());
  EXPECT_THROW(make_partition(0, 1), InputError);
  EXPECT_THROW(make_partition(1, -1), InputError);
}

TEST(Grid, CompatibilityIgnoresDof) {
  const PhaseSpaceGrid g = make_grid(2, 16, -4, 4, 0.5);
  EXPECT_TRUE(g.compatible(g.with_dof(1)));
  EXPECT_FALSE(g.compatible(make_grid(2, 16, -4, 4, 1.0)));
  EXPECT_FALSE(g.compatible(make_grid(2, 18, -4, 4, 0.5)));
  EXPECT_EQ(g.with_dof(1).position_size(), 16u);
  EXPECT_EQ(g.phase_size(), 65536u);
}

}  // namespace
