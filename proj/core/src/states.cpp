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

#include "wigmarg/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigmarg/error.hpp"
#include "wigmarg/purify.hpp"

namespace wigmarg {

PhaseSpaceGrid default_grid(int n, int points, double hbar, double half_width) {
  const double w = half_width * std::sqrt(hbar);
  return make_grid(n, points, -w, w, hbar);
}

WaveFunction ground_state(const PhaseSpaceGrid& grid) {
  const std::vector<double> zero(grid.dof(), 0.0);
  const std::vector<double> width(grid.dof(), std::sqrt(0.5 * grid.hbar()));
  return gaussian_wavepacket(grid, zero, zero, width);
}

WaveFunction random_packet(const PhaseSpaceGrid& grid, Rng& rng) {
  const double s = std::sqrt(grid.hbar());
  std::vector<double> x0(grid.dof()), p0(grid.dof()), w(grid.dof());
  for (int a = 0; a < grid.dof(); ++a) {
    x0[a] = rng.uniform(-0.4, 0.4) * s;
    p0[a] = rng.uniform(-0.4, 0.4) * s;
    w[a] = rng.uniform(0.85, 1.0) * std::sqrt(0.5 * grid.hbar());
  }
  return gaussian_wavepacket(grid, x0, p0, w);
}

std::vector<WaveFunction> random_orthonormal_states(const PhaseSpaceGrid& grid, std::size_t count,
                                                    Rng& rng) {
  std::vector<WaveFunction> out;
  const double vol = grid.cell_volume();
  while (out.size() < count) {
    const WaveFunction packet = random_packet(grid, rng);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Eigen::VectorXcd v = packet.amplitudes() * std::polar(1.0, phase);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : out) v -= b.amplitudes() * (b.amplitudes().dot(v) * vol);
    }
    const double nrm = std::sqrt(v.squaredNorm() * vol);
    // Nearby random packets can be nearly parallel; draw again.
    if (nrm < 1e-3) continue;
    out.emplace_back(grid, v / nrm);
  }
  return out;
}

std::vector<double> random_weights(std::size_t count, Rng& rng) {
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& x : w) {
    x = 0.05 + rng.uniform();
    total += x;
  }
  for (auto& x : w) x /= total;
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

DensityMatrix random_mixed(const PhaseSpaceGrid& grid, std::size_t rank, Rng& rng) {
  if (rank < 1) throw InputError("rank must be at least 1");
  std::vector<double> w = random_weights(rank, rng);
  std::vector<WaveFunction> v = random_orthonormal_states(grid, rank, rng);
  return assemble_density(SpectralDecomposition{std::move(w), std::move(v), 0.0});
}

WaveFunction schmidt_state(const PhaseSpaceGrid& joint, const Partition& partition,
                           const std::vector<double>& weights, Rng& rng) {
  if (!partition.bipartite() || partition.dof() != joint.dof()) {
    throw InputError("schmidt_state: partition inconsistent with the grid");
  }
  const PhaseSpaceGrid ga = joint.with_dof(partition.n_a);
  const PhaseSpaceGrid gb = joint.with_dof(partition.n_b);
  std::vector<WaveFunction> a = random_orthonormal_states(ga, weights.size(), rng);
  std::vector<WaveFunction> b = orthonormal_family(gb, weights.size());
  return assemble_purification(weights, std::move(a), std::move(b)).psi;
}

Eigen::MatrixXd random_symplectic(const Partition& partition, Rng& rng) {
  const int n = partition.dof();
  const Eigen::Index dim = 2 * n;
  // Position/momentum row of mode k inside the (x_A, p_A, x_B, p_B) ordering.
  auto xi = [&](int k) { return k < partition.n_a ? k : partition.n_a + k; };
  auto pi = [&](int k) {
    return k < partition.n_a ? partition.n_a + k : 2 * partition.n_a + partition.n_b + (k - partition.n_a);
  };
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
    const double r = rng.uniform(-0.3, 0.3);
    g(xi(k), xi(k)) = std::exp(r);
    g(pi(k), pi(k)) = std::exp(-r);
    s = g * s;

    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(dim, dim);
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    rot(xi(k), xi(k)) = std::cos(th);
    rot(xi(k), pi(k)) = std::sin(th);
    rot(pi(k), xi(k)) = -std::sin(th);
    rot(pi(k), pi(k)) = std::cos(th);
    s = rot * s;
  }
  // Shear p -> p + C x with C symmetric couples the modes.
  Eigen::MatrixXd shear = Eigen::MatrixXd::Identity(dim, dim);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      const double c = rng.uniform(-0.2, 0.2);
      shear(pi(k), xi(l)) = c;
      shear(pi(l), xi(k)) = c;
    }
  }
  return shear * s;
}

CovarianceMatrix random_covariance(const Partition& partition, double hbar, Rng& rng) {
  const int n = partition.dof();
  const Eigen::MatrixXd s = random_symplectic(partition, rng);
  Eigen::VectorXd d(2 * n);
  const Partition& p = partition;
  for (int k = 0; k < n; ++k) {
    const double nu = 0.5 * hbar * rng.uniform(1.0, 1.4);
    const int x = k < p.n_a ? k : p.n_a + k;
    const int q = k < p.n_a ? p.n_a + k : 2 * p.n_a + p.n_b + (k - p.n_a);
    d[x] = nu;
    d[q] = nu;
  }
  Eigen::MatrixXd sigma = s.transpose() * d.asDiagonal() * s;
  sigma = 0.5 * (sigma + sigma.transpose());
  return make_covariance(std::move(sigma), partition, hbar);
}

std::vector<NamedState> bipartite_family(const PhaseSpaceGrid& joint, const Partition& partition,
                                         Rng& rng) {
  if (!partition.bipartite() || partition.dof() != joint.dof()) {
    throw InputError("bipartite_family: partition inconsistent with the grid");
  }
  const PhaseSpaceGrid ga = joint.with_dof(partition.n_a);
  const PhaseSpaceGrid gb = joint.with_dof(partition.n_b);
  std::vector<NamedState> out;

  // Draws are sequenced explicitly; argument evaluation order is unspecified.
  {
    const WaveFunction a = random_packet(ga, rng);
    const WaveFunction b = random_packet(gb, rng);
    out.push_back({"pure_product", pure_density(tensor_product(a, b))});
  }

  // Superposition of two product packets: entangled but not in Schmidt form.
  {
    const WaveFunction a1 = random_packet(ga, rng), a2 = random_packet(ga, rng);
    const WaveFunction b1 = random_packet(gb, rng), b2 = random_packet(gb, rng);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Eigen::VectorXcd v = tensor_product(a1, b1).amplitudes() +
                         std::polar(0.8, phase) * tensor_product(a2, b2).amplitudes();
    out.push_back({"pure_entangled", pure_density(normalize(WaveFunction(joint, std::move(v))))});
  }

  {
    const DensityMatrix a = random_mixed(ga, 2, rng);
    const DensityMatrix b = random_mixed(gb, 2, rng);
    out.push_back({"mixed_product", tensor_product(a, b)});
  }
  {
    const std::vector<double> w = random_weights(2, rng);
    out.push_back({"schmidt_rank2", pure_density(schmidt_state(joint, partition, w, rng))});
  }
  for (std::size_t rank : {2u, 3u, 4u}) {
    out.push_back({"mixed_rank" + std::to_string(rank), random_mixed(joint, rank, rng)});
  }
  return out;
}

}  // namespace wigmarg
