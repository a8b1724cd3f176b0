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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wigmarg/grid.hpp"
#include "wigmarg/hilbert.hpp"

namespace wigmarg {

/// Samples of a function on the phase-space lattice of a grid, row-major over
/// the axes (x_1..x_n, p_1..p_n).
template <class T>
class PhaseSpaceFunction {
 public:
  PhaseSpaceFunction(PhaseSpaceGrid grid, std::vector<T> values,
                     std::optional<Partition> partition = std::nullopt);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const std::optional<Partition>& partition() const { return partition_; }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }

  T at(std::span<const int> idx) const { return values_[flat_index(idx, grid_.points())]; }

  /// sum values (dx dp)^n.
  T integral() const;
  double max_abs() const;

 private:
  PhaseSpaceGrid grid_;
  std::optional<Partition> partition_;
  std::vector<T> values_;
};

using WignerGrid = PhaseSpaceFunction<double>;
using CrossWignerGrid = PhaseSpaceFunction<cplx>;
/// Weyl symbols are complex in general (real for Hermitian operators).
using SymbolGrid = PhaseSpaceFunction<cplx>;

extern template class PhaseSpaceFunction<double>;
extern template class PhaseSpaceFunction<cplx>;

/// Knobs for the forward transforms.
struct TransformOptions {
  /// Fault injection for negative controls: evaluates e^{+ipy/hbar} instead of
  /// e^{-ipy/hbar} in every forward transform. Never set outside tests.
  bool negate_phase = false;
};

/// W(phi, psi)(x, p) = (2 pi hbar)^{-n} ∫ e^{-ipy/hbar} phi(x + y/2) conj(psi(x - y/2)) dy
/// on the lattice. The half-cell shifts use the band-limited half-step
/// lattice, values outside the domain are zero, and y runs over
/// [-L/2, L/2) with the y = ±L/2 samples averaged.
///
/// Throws InputError on grid mismatch or if either state exceeds 1e-10 on
/// the boundary.
CrossWignerGrid cross_wigner(const WaveFunction& phi, const WaveFunction& psi,
                             const TransformOptions& options = {});

/// W(psi, psi), truncated to its real part after checking that the imaginary
/// residue is below 1e-10 max|W|.
WignerGrid wigner_transform(const WaveFunction& psi, const TransformOptions& options = {});

/// Wigner distribution of a density matrix, computed from its kernel along
/// the antidiagonal y-direction. Requires the kernel to be below 1e-10 of its
/// maximum on the lattice boundary.
WignerGrid wigner_of_density(const DensityMatrix& rho, const TransformOptions& options = {});

/// q(x, p) = ∫ e^{-ipy/hbar} K(x + y/2, x - y/2) dy for an arbitrary operator
/// kernel on the grid (no density invariants required).
SymbolGrid weyl_symbol_of_kernel(const PhaseSpaceGrid& grid, const Eigen::MatrixXcd& kernel,
                                 const TransformOptions& options = {});

/// Weyl symbol of rho; equals (2 pi hbar)^n wigner_of_density(rho).
SymbolGrid weyl_symbol(const DensityMatrix& rho, const TransformOptions& options = {});

/// Inverse transform: K(x + y/2, x - y/2) = ∫ e^{ipy/hbar} W(x, p) dp.
///
/// Kernel entries with odd y/dx are recovered by half-cell interpolation
/// along x, which is exact for band-limited kernels; entries with
/// |x - x'| >= L/2 are set to zero. Throws InputError unless W integrates to
/// one within 1e-4; the result is renormalized to unit trace.
DensityMatrix density_from_wigner(const WignerGrid& wigner);

/// ∫ q(z) W(psi, phi)(z) dz, i.e. <phi|Q psi> for Q = Op_W(q).
cplx pairing_via_symbol(const SymbolGrid& symbol, const WaveFunction& phi, const WaveFunction& psi,
                        const TransformOptions& options = {});

struct TraceResult {
  cplx value;
  /// max |q| on the lattice boundary relative to max |q|.
  double boundary_magnitude = 0.0;
  /// boundary_magnitude <= 1e-10; the lattice stand-in for symbol decay.
  bool boundary_decayed = true;
};

/// (2 pi hbar)^{-n} ∫ q(z) dz. A symbol that has not decayed at the boundary
/// is reported in the result, not rejected.
TraceResult trace_via_integral(const SymbolGrid& symbol);

/// rho_A(z_A) = sum over the (x_B, p_B) lattice of W (dx dp)^{n_B}.
WignerGrid marginalize_b(const WignerGrid& wigner, const Partition& partition);

/// sum over the p lattice of W dp^n, one value per position node.
std::vector<double> marginal_position(const WignerGrid& wigner);

/// Samples f(z) at every lattice node, z ordered (x_1..x_n, p_1..p_n).
SymbolGrid sample_symbol(const PhaseSpaceGrid& grid,
                         const std::function<cplx(std::span<const double>)>& f);

}  // namespace wigmarg
