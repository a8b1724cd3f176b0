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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wigmarg/grid.hpp"

namespace wigmarg {

using cplx = std::complex<double>;

/// Complex amplitudes sampled on the position lattice of a grid, row-major
/// over the n axes. The L^2 norm uses the cell measure: sum |psi|^2 dx^n.
class WaveFunction {
 public:
  /// Throws InputError if the amplitude count is not N^n or non-finite.
  WaveFunction(PhaseSpaceGrid grid, Eigen::VectorXcd amplitudes);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  double norm() const;
  /// Largest |psi| over nodes lying on the outer face of the lattice.
  double boundary_amplitude() const;

 private:
  PhaseSpaceGrid grid_;
  Eigen::VectorXcd amplitudes_;
};

/// <a|b> = sum conj(a) b dx^n. Throws on grid mismatch.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

WaveFunction normalize(const WaveFunction& psi);

/// Normalized packet psi(x) ∝ exp(-(x - x0)^2 / (4 sigma^2) + i p0 x / hbar)
/// per axis, where sigma is the position standard deviation. sigma^2 = hbar/2
/// with x0 = p0 = 0 is the oscillator ground state.
///
/// Throws InputError if the normalized packet exceeds 1e-12 on the boundary.
WaveFunction gaussian_wavepacket(const PhaseSpaceGrid& grid, std::span<const double> center_x,
                                 std::span<const double> center_p, std::span<const double> width);

/// psi_a ⊗ psi_b on the grid with n_a + n_b degrees of freedom (A axes first).
WaveFunction tensor_product(const WaveFunction& a, const WaveFunction& b);

/// Hermitian, positive semi-definite, unit-trace kernel <x_i|rho|x_j> on the
/// position lattice. Tr rho = sum_i K_ii dx^n; the operator acts as
/// (rho psi)_i = sum_j K_ij psi_j dx^n.
class DensityMatrix {
 public:
  enum class Validation {
    full,        ///< Hermiticity, unit trace and positive semi-definiteness.
    structural,  ///< Hermiticity and unit trace only (no eigensolve).
  };

  /// Throws InputError if the kernel violates the requested invariants or
  /// exceeds the 4096-row cap.
  static DensityMatrix from_kernel(PhaseSpaceGrid grid, Eigen::MatrixXcd kernel,
                                   Validation validation = Validation::full);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& kernel() const { return kernel_; }
  cplx trace() const;

  /// Largest |K_ij| over rows or columns that touch the lattice boundary,
  /// relative to max |K|.
  double relative_boundary_magnitude() const;

 private:
  DensityMatrix(PhaseSpaceGrid grid, Eigen::MatrixXcd kernel)
      : grid_(std::move(grid)), kernel_(std::move(kernel)) {}

  PhaseSpaceGrid grid_;
  Eigen::MatrixXcd kernel_;
};

/// Hard cap on N^n for dense kernels.
inline constexpr std::size_t kMaxKernelRows = 4096;

/// rho = sum_j lambda_j |psi_j><psi_j|, weights in descending order.
struct SpectralDecomposition {
  std::vector<double> weights;
  std::vector<WaveFunction> vectors;
  /// Sum of the (non-negative) eigenvalues dropped below the threshold.
  double dropped_mass = 0.0;
};

/// Throws InputError if weights do not sum to one within 1e-8, are negative,
/// or the vectors have a Gram defect above 1e-6.
DensityMatrix assemble_density(const SpectralDecomposition& decomposition);

/// Eigenpairs with lambda > threshold, weights descending, each vector rotated
/// so its largest-magnitude component (lowest index on ties) is real positive.
/// Throws InputError on eigenvalues below -1e-10 lambda_max.
SpectralDecomposition spectral_decompose(const DensityMatrix& rho, double threshold = 1e-12);

DensityMatrix pure_density(const WaveFunction& psi);

/// Kernel of rho_a ⊗ rho_b on the joint grid.
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// K_A(i_A, j_A) = sum_{i_B} K(i_A i_B, j_A i_B) dx^{n_B}: the partial trace
/// in the scaled position delta basis of B.
DensityMatrix partial_trace_operator(const DensityMatrix& rho, const Partition& partition);

/// sum_j <phi^A ⊗ b_j | rho (psi^A ⊗ b_j)> for an explicit orthonormal basis
/// (b_j) of B; agrees with partial_trace_operator when the basis is complete.
Eigen::MatrixXcd partial_trace_in_basis(const DensityMatrix& rho, const Partition& partition,
                                        std::span<const WaveFunction> b_basis);

/// Tr(rho^2) = sum_ij |K_ij|^2 dx^{2n}.
double purity(const DensityMatrix& rho);

/// max_ij |(<v_i|v_j>) - delta_ij|.
double gram_defect(std::span<const WaveFunction> vectors);

}  // namespace wigmarg
