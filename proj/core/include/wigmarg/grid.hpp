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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wigmarg {

/// Splits the degrees of freedom of a grid into subsystem A (the first n_a
/// axes) and subsystem B (the remaining n_b axes).
///
/// n_b == 0 denotes an unsplit (or already reduced) system; operations that
/// trace out or marginalize B require bipartite().
struct Partition {
  int n_a = 1;
  int n_b = 0;

  int dof() const { return n_a + n_b; }
  bool bipartite() const { return n_a >= 1 && n_b >= 1; }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Throws InputError unless n_a >= 1 and n_b >= 0.
Partition make_partition(int n_a, int n_b);

/// Uniform lattice over position space R^n and its FFT-dual momentum lattice.
///
/// Every axis shares the same (N, x_min, x_max). Position nodes are
/// x_j = x_min + j dx for j in [0, N); momentum nodes are p_k = (k - N/2) dp
/// for k in [0, N), so p runs from -N/2 dp to (N/2 - 1) dp. dx dp N = 2 pi hbar.
class PhaseSpaceGrid {
 public:
  int dof() const { return n_; }
  int points() const { return points_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double hbar() const { return hbar_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return dx_; }
  double dp() const { return dp_; }

  double x(int j) const { return x_min_ + j * dx_; }
  double p(int k) const { return (k - points_ / 2) * dp_; }
  double p_min() const { return p(0); }
  double p_max() const { return p(points_ - 1); }

  /// dx^n, the measure of one position cell.
  double cell_volume() const;
  /// (dx dp)^n, the measure of one phase-space cell.
  double phase_cell_volume() const;

  /// N^n.
  std::size_t position_size() const;
  /// N^(2n).
  std::size_t phase_size() const;

  /// The same lattice with a different number of degrees of freedom.
  PhaseSpaceGrid with_dof(int n) const;

  /// Same N, bounds and hbar (the number of degrees of freedom may differ).
  bool compatible(const PhaseSpaceGrid& other) const;

  friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;

 private:
  friend PhaseSpaceGrid make_grid(int, int, double, double, double);
  PhaseSpaceGrid(int n, int points, double x_min, double x_max, double hbar);

  int n_;
  int points_;
  double x_min_;
  double x_max_;
  double hbar_;
  double dx_;
  double dp_;
};

/// Validates and builds a grid. Rejects n < 1, odd N, N < 8, x_max <= x_min,
/// hbar <= 0 and non-finite values with InputError.
PhaseSpaceGrid make_grid(int n, int points, double x_min, double x_max, double hbar = 1.0);

/// Phase-space coordinates of the lattice node with multi-index `idx`, given
/// in WignerGrid axis order (x_1..x_n, p_1..p_n).
///
/// Without a partition the result is ordered (x_1..x_n, p_1..p_n); with one it
/// is (x_A, p_A, x_B, p_B), the ordering used by covariance matrices.
std::vector<double> phase_point(const PhaseSpaceGrid& grid, std::span<const int> idx,
                                std::optional<Partition> partition = std::nullopt);

/// Row-major multi-index helpers over axes that all have N points.
std::size_t flat_index(std::span<const int> idx, int points);
void unflatten_index(std::size_t flat, int points, std::span<int> idx);

/// N^k without overflow checks (k <= 8 in practice).
std::size_t ipow(std::size_t base, int exponent);

}  // namespace wigmarg
