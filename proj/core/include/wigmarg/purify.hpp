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

#include "wigmarg/grid.hpp"
#include "wigmarg/hilbert.hpp"
#include "wigmarg/wigner.hpp"

namespace wigmarg {

/// psi = sum_j sqrt(lambda_j) a_j ⊗ b_j on the joint grid (A axes first).
struct Purification {
  WaveFunction psi;
  Partition partition;
  std::vector<double> weights;
  std::vector<WaveFunction> a_vectors;
  std::vector<WaveFunction> b_vectors;
  /// Spectral mass of rho_A below the rank threshold, not represented in psi.
  double dropped_mass = 0.0;
};

/// Parameters of the deterministic orthonormal family on B: Gram-Schmidt over
/// g(x) x^alpha, where g is the Gaussian packet of position width
/// width_scale * sqrt(hbar/2) with momentum kick `momentum` on every axis.
/// Monomials are taken by total degree, then lexicographically.
struct LadderFamily {
  double width_scale = 1.0;
  double momentum = 0.0;
};

/// The first `count` vectors of the family (count <= N^n). Monomials that
/// become numerically dependent are skipped; once the monomial ladder is
/// exhausted the set is completed from position delta vectors.
std::vector<WaveFunction> orthonormal_family(const PhaseSpaceGrid& grid, std::size_t count,
                                             const LadderFamily& family = {});

/// Builds psi from explicit Schmidt data; validates weights and orthonormality.
Purification assemble_purification(std::vector<double> weights, std::vector<WaveFunction> a_vectors,
                                   std::vector<WaveFunction> b_vectors);

/// Purifies rho_A with the eigenvectors of rho_A (eigenvalues > 1e-12) and the
/// first r vectors of `family` on b_grid. b_grid must share N, bounds and hbar
/// with rho_A's grid so that the joint lattice exists.
Purification purify(const DensityMatrix& rho_a, const PhaseSpaceGrid& b_grid,
                    const LadderFamily& family = {});

/// Squared singular values of psi reshaped to an N^{n_A} x N^{n_B} matrix,
/// scaled by dx^n, descending.
std::vector<double> schmidt_weights(const WaveFunction& psi, const Partition& partition);

struct WigsumReport {
  double max_residual = 0.0;  ///< max |lhs - rhs|
  double max_rhs = 0.0;       ///< max |rhs|
  bool passed = false;        ///< max_residual <= 1e-6 max_rhs
};

/// Compares marginalize_b(wigner_transform(psi)) with
/// sum_j lambda_j wigner_transform(a_j) on the A phase-space lattice.
WigsumReport verify_wigsum(const Purification& purification, const TransformOptions& options = {});

}  // namespace wigmarg
