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

#include "wigmarg/lattice.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "wigmarg/grid.hpp"

namespace wigmarg::lattice {

Eigen::MatrixXd half_shift_matrix(int points) {
  const int n = points;
  Eigen::MatrixXd s(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double t = (a - b) + 0.5;
      double acc = 1.0;
      for (int k = 1; k < n / 2; ++k) acc += 2.0 * std::cos(2.0 * std::numbers::pi * k * t / n);
      s(a, b) = acc / n;
    }
  }
  return s;
}

void apply_along_axis(std::span<std::complex<double>> data, int rank, int points, int axis,
                      const Eigen::MatrixXcd& op) {
  const std::size_t n = static_cast<std::size_t>(points);
  const std::size_t inner = ipow(n, rank - axis - 1);
  const std::size_t outer = ipow(n, axis);
  using RowBlock = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowBlock scratch(n, inner);
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<RowBlock> block(data.data() + o * n * inner, static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(inner));
    scratch.noalias() = op * block;
    block = scratch;
  }
}

Eigen::VectorXcd upsample_half_step(const Eigen::VectorXcd& f, int rank, int points) {
  const Eigen::MatrixXcd shift = half_shift_matrix(points).cast<std::complex<double>>();
  const std::size_t n = static_cast<std::size_t>(points);

  // Upsample one axis at a time; after step a, axes < a hold 2N nodes.
  std::vector<std::complex<double>> cur(f.data(), f.data() + f.size());
  for (int axis = 0; axis < rank; ++axis) {
    const std::size_t outer = ipow(2 * n, axis);
    const std::size_t inner = ipow(n, rank - axis - 1);
    std::vector<std::complex<double>> shifted = cur;
    // Apply the shift along `axis` of the mixed-size array.
    using RowBlock = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowBlock scratch(n, inner);
    for (std::size_t o = 0; o < outer; ++o) {
      Eigen::Map<RowBlock> block(shifted.data() + o * n * inner, static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(inner));
      scratch.noalias() = shift * block;
      block = scratch;
    }
    std::vector<std::complex<double>> next(outer * 2 * n * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = (o * n + j) * inner;
        const std::size_t even = (o * 2 * n + 2 * j) * inner;
        const std::size_t odd = even + inner;
        for (std::size_t i = 0; i < inner; ++i) {
          next[even + i] = cur[src + i];
          next[odd + i] = shifted[src + i];
        }
      }
    }
    cur = std::move(next);
  }
  return Eigen::Map<Eigen::VectorXcd>(cur.data(), static_cast<Eigen::Index>(cur.size()));
}

}  // namespace wigmarg::lattice
