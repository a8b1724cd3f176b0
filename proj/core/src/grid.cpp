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
#include <string>

#include "wigmarg/error.hpp"

namespace wigmarg {

Partition make_partition(int n_a, int n_b) {
  if (n_a < 1 || n_b < 0) {
    throw InputError("partition needs n_a >= 1 and n_b >= 0, got (" + std::to_string(n_a) +
                     ", " + std::to_string(n_b) + ")");
  }
  return Partition{n_a, n_b};
}

PhaseSpaceGrid::PhaseSpaceGrid(int n, int points, double x_min, double x_max, double hbar)
    : n_(n),
      points_(points),
      x_min_(x_min),
      x_max_(x_max),
      hbar_(hbar),
      dx_((x_max - x_min) / points),
      dp_(2.0 * std::numbers::pi * hbar / (x_max - x_min)) {}

double PhaseSpaceGrid::cell_volume() const { return std::pow(dx_, n_); }

double PhaseSpaceGrid::phase_cell_volume() const { return std::pow(dx_ * dp_, n_); }

std::size_t PhaseSpaceGrid::position_size() const { return ipow(points_, n_); }

std::size_t PhaseSpaceGrid::phase_size() const { return ipow(points_, 2 * n_); }

PhaseSpaceGrid PhaseSpaceGrid::with_dof(int n) const {
  return make_grid(n, points_, x_min_, x_max_, hbar_);
}

bool PhaseSpaceGrid::compatible(const PhaseSpaceGrid& other) const {
  return points_ == other.points_ && x_min_ == other.x_min_ && x_max_ == other.x_max_ &&
         hbar_ == other.hbar_;
}

PhaseSpaceGrid make_grid(int n, int points, double x_min, double x_max, double hbar) {
  if (n < 1) throw InputError("grid needs at least one degree of freedom");
  if (points < 8 || points % 2 != 0) {
    throw InputError("points per axis must be even and >= 8, got " + std::to_string(points));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InputError("grid bounds must be finite with x_max > x_min");
  }
  if (!std::isfinite(hbar) || !(hbar > 0.0)) throw InputError("hbar must be positive and finite");
  return PhaseSpaceGrid(n, points, x_min, x_max, hbar);
}

std::vector<double> phase_point(const PhaseSpaceGrid& grid, std::span<const int> idx,
                                std::optional<Partition> partition) {
  const int n = grid.dof();
  if (static_cast<int>(idx.size()) != 2 * n) {
    throw InputError("phase-space index must have 2n = " + std::to_string(2 * n) + " entries");
  }
  for (int v : idx) {
    if (v < 0 || v >= grid.points()) throw InputError("phase-space index out of range");
  }
  if (partition && partition->dof() != n) throw InputError("partition does not match grid");

  std::vector<double> z(2 * n);
  if (!partition) {
    for (int a = 0; a < n; ++a) {
      z[a] = grid.x(idx[a]);
      z[n + a] = grid.p(idx[n + a]);
    }
    return z;
  }
  const int na = partition->n_a;
  const int nb = partition->n_b;
  for (int a = 0; a < na; ++a) {
    z[a] = grid.x(idx[a]);
    z[na + a] = grid.p(idx[n + a]);
  }
  for (int b = 0; b < nb; ++b) {
    z[2 * na + b] = grid.x(idx[na + b]);
    z[2 * na + nb + b] = grid.p(idx[n + na + b]);
  }
  return z;
}

std::size_t flat_index(std::span<const int> idx, int points) {
  std::size_t flat = 0;
  for (int v : idx) flat = flat * static_cast<std::size_t>(points) + static_cast<std::size_t>(v);
  return flat;
}

void unflatten_index(std::size_t flat, int points, std::span<int> idx) {
  for (std::size_t a = idx.size(); a-- > 0;) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(points));
    flat /= static_cast<std::size_t>(points);
  }
}

std::size_t ipow(std::size_t base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace wigmarg
