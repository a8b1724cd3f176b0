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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wigmarg/gaussian.hpp"
#include "wigmarg/grid.hpp"
#include "wigmarg/hilbert.hpp"

// Seeded test-state generators shared by the CLI and the invariant suite.
namespace wigmarg {

/// Deterministic uniform variates. The conversion from the engine output is
/// explicit so the same seed gives the same states on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Symmetric bounds ±half_width sqrt(hbar) used by the generators' defaults.
PhaseSpaceGrid default_grid(int n, int points, double hbar, double half_width = 9.0);

/// Oscillator ground state (sigma^2 = hbar/2 on every axis).
WaveFunction ground_state(const PhaseSpaceGrid& grid);

/// Packet with random centre, kick and width drawn from ranges scaled by
/// sqrt(hbar): |x0|, |p0| <= 0.4 sqrt(hbar), sigma in [0.85, 1.0] sqrt(hbar/2).
/// These stay below 1e-12 on the boundary of the default grid down to N = 16.
WaveFunction random_packet(const PhaseSpaceGrid& grid, Rng& rng);

/// `count` orthonormal states: Gram-Schmidt over random packets, each with a
/// random global phase.
std::vector<WaveFunction> random_orthonormal_states(const PhaseSpaceGrid& grid, std::size_t count,
                                                    Rng& rng);

/// Random weights on the simplex, descending, each at least 0.05.
std::vector<double> random_weights(std::size_t count, Rng& rng);

DensityMatrix random_mixed(const PhaseSpaceGrid& grid, std::size_t rank, Rng& rng);

/// Pure bipartite state sum_j sqrt(w_j) a_j ⊗ b_j with random orthonormal a_j
/// on A and the deterministic ladder family on B.
WaveFunction schmidt_state(const PhaseSpaceGrid& joint, const Partition& partition,
                           const std::vector<double>& weights, Rng& rng);

/// Admissible random covariance: Sigma = S^T diag(nu) S with nu_k >= hbar/2
/// (thermal factors in [1, 1.4]) and S a product of mild random squeezes,
/// phase rotations and symmetric shears. Kept narrow enough that two-mode
/// states fit the default 64-point lattice.
CovarianceMatrix random_covariance(const Partition& partition, double hbar, Rng& rng);

/// Random symplectic matrix for J = symplectic_form(partition).
Eigen::MatrixXd random_symplectic(const Partition& partition, Rng& rng);

struct NamedState {
  std::string name;
  DensityMatrix rho;
};

/// The bipartite family exercised by the marginalization checks: pure
/// product, pure entangled, mixed product, Schmidt rank 2, and random mixed
/// states of rank 2, 3 and 4.
std::vector<NamedState> bipartite_family(const PhaseSpaceGrid& joint, const Partition& partition,
                                         Rng& rng);

}  // namespace wigmarg
