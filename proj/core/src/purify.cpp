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
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "wigmarg/error.hpp"

namespace wigmarg {
namespace {

// Multi-indices of total degree `degree` over `rank` axes, lexicographic.
void monomials_of_degree(int rank, int degree, std::vector<int>& cur, int axis,
                         std::vector<std::vector<int>>& out) {
  if (axis == rank - 1) {
    cur[axis] = degree;
    out.push_back(cur);
    return;
  }
  for (int d = degree; d >= 0; --d) {
    cur[axis] = d;
    monomials_of_degree(rank, degree - d, cur, axis + 1, out);
  }
}

// Orthogonalizes v against `basis` twice (classical Gram-Schmidt with one
// reorthogonalization pass) and returns the remaining norm.
double orthogonalize(Eigen::VectorXcd& v, const std::vector<Eigen::VectorXcd>& basis, double vol) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b * (b.dot(v) * vol);
  }
  return std::sqrt(v.squaredNorm() * vol);
}

}  // namespace

std::vector<WaveFunction> orthonormal_family(const PhaseSpaceGrid& grid, std::size_t count,
                                             const LadderFamily& family) {
  const std::size_t dim = grid.position_size();
  if (count > dim) {
    throw InputError("requested " + std::to_string(count) + " orthonormal vectors on a space of dimension " +
                     std::to_string(dim));
  }
  if (!(family.width_scale > 0.0)) throw InputError("ladder width scale must be positive");
  const int n = grid.dof();
  const int points = grid.points();
  const double vol = grid.cell_volume();
  const double sigma = family.width_scale * std::sqrt(0.5 * grid.hbar());

  Eigen::VectorXcd packet(static_cast<Eigen::Index>(dim));
  std::vector<int> idx(n);
  for (std::size_t i = 0; i < dim; ++i) {
    unflatten_index(i, points, idx);
    cplx v = 1.0;
    for (int a = 0; a < n; ++a) {
      const double x = grid.x(idx[a]);
      v *= std::exp(cplx(-x * x / (4.0 * sigma * sigma), family.momentum * x / grid.hbar()));
    }
    packet[static_cast<Eigen::Index>(i)] = v;
  }

  std::vector<Eigen::VectorXcd> basis;
  // Degrees beyond N - 1 per axis cannot add new directions on N nodes.
  const int max_degree = n * (points - 1);
  int failures = 0;
  for (int degree = 0; degree <= max_degree && basis.size() < count && failures < 4; ++degree) {
    std::vector<std::vector<int>> monos;
    std::vector<int> cur(n);
    monomials_of_degree(n, degree, cur, 0, monos);
    bool added = false;
    for (const auto& alpha : monos) {
      if (basis.size() >= count) break;
      Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < dim; ++i) {
        unflatten_index(i, points, idx);
        double mono = 1.0;
        for (int a = 0; a < n; ++a) mono *= std::pow(grid.x(idx[a]) / sigma, alpha[a]);
        v[static_cast<Eigen::Index>(i)] = packet[static_cast<Eigen::Index>(i)] * mono;
      }
      const double before = std::sqrt(v.squaredNorm() * vol);
      const double after = orthogonalize(v, basis, vol);
      if (after > 1e-8 * before) {
        basis.push_back(v / after);
        added = true;
      }
    }
    failures = added ? 0 : failures + 1;
  }
  // Complete from scaled position deltas.
  for (std::size_t i = 0; i < dim && basis.size() < count; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(vol);
    const double after = orthogonalize(v, basis, vol);
    if (after > 1e-6) basis.push_back(v / after);
  }
  if (basis.size() < count) throw NumericalError("could not complete the orthonormal family");

  std::vector<WaveFunction> out;
  out.reserve(count);
  for (auto& b : basis) out.emplace_back(grid, std::move(b));
  return out;
}

Purification assemble_purification(std::vector<double> weights, std::vector<WaveFunction> a_vectors,
                                   std::vector<WaveFunction> b_vectors) {
  if (weights.empty() || weights.size() != a_vectors.size() || weights.size() != b_vectors.size()) {
    throw InputError("purification needs matching weights, A vectors and B vectors");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("Schmidt weights must be non-negative");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    throw InputError("Schmidt weights sum to " + format_real(total) + ", expected 1");
  }
  if (gram_defect(a_vectors) > 1e-8 || gram_defect(b_vectors) > 1e-8) {
    throw InputError("Schmidt vectors are not orthonormal");
  }
  const PhaseSpaceGrid& ga = a_vectors.front().grid();
  const PhaseSpaceGrid& gb = b_vectors.front().grid();
  if (!ga.compatible(gb)) throw InputError("A and B grids must share N, bounds and hbar");

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(ga.position_size() * gb.position_size()));
  for (std::size_t j = 0; j < weights.size(); ++j) {
    amps += std::sqrt(weights[j]) * tensor_product(a_vectors[j], b_vectors[j]).amplitudes();
  }
  const Partition part{ga.dof(), gb.dof()};
  WaveFunction psi(ga.with_dof(part.dof()), std::move(amps));
  return Purification{std::move(psi), part, std::move(weights), std::move(a_vectors),
                      std::move(b_vectors), 0.0};
}

Purification purify(const DensityMatrix& rho_a, const PhaseSpaceGrid& b_grid,
                    const LadderFamily& family) {
  if (b_grid.hbar() != rho_a.grid().hbar()) throw InputError("purify: B grid has a different hbar");
  if (!rho_a.grid().compatible(b_grid)) {
    throw InputError("purify: B grid must share N and bounds with the A grid");
  }
  SpectralDecomposition spec = spectral_decompose(rho_a, 1e-12);
  const std::size_t rank = spec.weights.size();
  if (rank > b_grid.position_size()) {
    throw InputError("purify: rank " + std::to_string(rank) + " exceeds the B-space dimension " +
                     std::to_string(b_grid.position_size()));
  }
  std::vector<WaveFunction> b_vectors = orthonormal_family(b_grid, rank, family);
  Purification p = assemble_purification(std::move(spec.weights), std::move(spec.vectors),
                                         std::move(b_vectors));
  p.dropped_mass = spec.dropped_mass;
  return p;
}

std::vector<double> schmidt_weights(const WaveFunction& psi, const Partition& partition) {
  const PhaseSpaceGrid& grid = psi.grid();
  if (!partition.bipartite() || partition.dof() != grid.dof()) {
    throw InputError("schmidt_weights: partition inconsistent with the grid");
  }
  const auto na = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_a));
  const auto nb = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_b));
  // Row-major amplitudes (i_A, i_B) == column-major nb x na.
  const Eigen::Map<const Eigen::MatrixXcd> m(psi.amplitudes().data(), nb, na);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  std::vector<double> w;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()[i];
    w.push_back(s * s * grid.cell_volume());
  }
  return w;
}

WigsumReport verify_wigsum(const Purification& p, const TransformOptions& options) {
  const WignerGrid lhs = marginalize_b(wigner_transform(p.psi, options), p.partition);
  std::vector<double> rhs(lhs.values().size(), 0.0);
  for (std::size_t j = 0; j < p.weights.size(); ++j) {
    const WignerGrid wj = wigner_transform(p.a_vectors[j], options);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += p.weights[j] * wj.values()[i];
  }
  WigsumReport r;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    r.max_residual = std::max(r.max_residual, std::abs(lhs.values()[i] - rhs[i]));
    r.max_rhs = std::max(r.max_rhs, std::abs(rhs[i]));
  }
  r.passed = r.max_residual <= 1e-6 * r.max_rhs;
  return r;
}

}  // namespace wigmarg
