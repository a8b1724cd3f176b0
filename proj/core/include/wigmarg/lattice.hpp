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
#include <cstddef>
#include <span>

#include <Eigen/Dense>

// Tensor-lattice utilities shared by the transforms. Arrays are row-major
// over `rank` axes that all have `points` nodes.
namespace wigmarg::lattice {

/// Periodic band-limited interpolation onto the half-shifted lattice:
/// (S f)[a] approximates f(x_a + dx/2) from samples f(x_0..x_{N-1}).
/// The Nyquist mode contributes cos(pi/2) = 0, so S is real.
Eigen::MatrixXd half_shift_matrix(int points);

/// In place: replaces every 1-D fibre along `axis` by `op * fibre`.
void apply_along_axis(std::span<std::complex<double>> data, int rank, int points, int axis,
                      const Eigen::MatrixXcd& op);

/// Values of `f` on the 2N half-step lattice along every axis:
/// out[h_1..h_n] = f(x_min + h_1 dx/2, ...), computed from the N-point samples.
Eigen::VectorXcd upsample_half_step(const Eigen::VectorXcd& f, int rank, int points);

}  // namespace wigmarg::lattice
