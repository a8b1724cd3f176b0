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

#include "wigmarg/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "wigmarg/error.hpp"

namespace wigmarg {
namespace {

bool on_boundary(std::size_t flat, int rank, int points) {
  for (int a = 0; a < rank; ++a) {
    const int v = static_cast<int>(flat % static_cast<std::size_t>(points));
    if (v == 0 || v == points - 1) return true;
    flat /= static_cast<std::size_t>(points);
  }
  return false;
}

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what) {
  if (!(a == b)) throw InputError(std::string(what) + ": grid mismatch");
}

}  // namespace

WaveFunction::WaveFunction(PhaseSpaceGrid grid, Eigen::VectorXcd amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != grid_.position_size()) {
    throw InputError("wave function has " + std::to_string(amplitudes_.size()) +
                     " amplitudes, grid needs " + std::to_string(grid_.position_size()));
  }
  if (!amplitudes_.allFinite()) throw InputError("wave function has non-finite amplitudes");
}

double WaveFunction::norm() const {
  return std::sqrt(amplitudes_.squaredNorm() * grid_.cell_volume());
}

double WaveFunction::boundary_amplitude() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if (on_boundary(static_cast<std::size_t>(i), grid_.dof(), grid_.points())) {
      m = std::max(m, std::abs(amplitudes_[i]));
    }
  }
  return m;
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  return a.amplitudes().dot(b.amplitudes()) * a.grid().cell_volume();
}

WaveFunction normalize(const WaveFunction& psi) {
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw InputError("cannot normalize the zero vector");
  return WaveFunction(psi.grid(), psi.amplitudes() / nrm);
}

WaveFunction gaussian_wavepacket(const PhaseSpaceGrid& grid, std::span<const double> center_x,
                                 std::span<const double> center_p, std::span<const double> width) {
  const int n = grid.dof();
  if (static_cast<int>(center_x.size()) != n || static_cast<int>(center_p.size()) != n ||
      static_cast<int>(width.size()) != n) {
    throw InputError("wave packet parameters must have one entry per degree of freedom");
  }
  for (double w : width) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("wave packet widths must be positive");
  }
  const int points = grid.points();
  // Separable: build each axis factor, then take the outer product.
  std::vector<Eigen::VectorXcd> factors;
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXcd f(points);
    for (int j = 0; j < points; ++j) {
      const double x = grid.x(j);
      const double d = x - center_x[a];
      f[j] = std::exp(cplx(-d * d / (4.0 * width[a] * width[a]), center_p[a] * x / grid.hbar()));
    }
    factors.push_back(std::move(f));
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(grid.position_size()));
  std::vector<int> idx(n);
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    unflatten_index(static_cast<std::size_t>(i), points, idx);
    cplx v = 1.0;
    for (int a = 0; a < n; ++a) v *= factors[a][idx[a]];
    amps[i] = v;
  }
  WaveFunction psi = normalize(WaveFunction(grid, std::move(amps)));
  if (psi.boundary_amplitude() >= 1e-12) {
    throw InputError("wave packet leaks past the grid boundary (|psi| = " +
                     format_real(psi.boundary_amplitude()) + " >= 1e-12)");
  }
  return psi;
}

WaveFunction tensor_product(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid().compatible(b.grid())) throw InputError("tensor_product: grid mismatch");
  const PhaseSpaceGrid joint = a.grid().with_dof(a.grid().dof() + b.grid().dof());
  const Eigen::Index na = a.amplitudes().size();
  const Eigen::Index nb = b.amplitudes().size();
  Eigen::VectorXcd amps(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) amps.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
  return WaveFunction(joint, std::move(amps));
}

DensityMatrix DensityMatrix::from_kernel(PhaseSpaceGrid grid, Eigen::MatrixXcd kernel,
                                         Validation validation) {
  const auto rows = grid.position_size();
  if (rows > kMaxKernelRows) {
    throw InputError("density matrix with " + std::to_string(rows) + " rows exceeds the cap of " +
                     std::to_string(kMaxKernelRows));
  }
  if (static_cast<std::size_t>(kernel.rows()) != rows ||
      static_cast<std::size_t>(kernel.cols()) != rows) {
    throw InputError("kernel shape does not match the grid");
  }
  if (!kernel.allFinite()) throw InputError("kernel has non-finite entries");

  const double kmax = kernel.cwiseAbs().maxCoeff();
  const double herm = (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * kmax) {
    throw InputError("kernel is not Hermitian (defect " + format_real(herm / kmax) + ")");
  }
  const cplx tr = kernel.trace() * grid.cell_volume();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw InputError("kernel trace is " + format_real(tr.real()) + ", expected 1");
  }
  if (validation == Validation::full) {
    const Eigen::MatrixXcd h = 0.5 * (kernel + kernel.adjoint()) * grid.cell_volume();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10 * ev.maxCoeff()) {
      throw InputError("kernel is not positive semi-definite (min eigenvalue " +
                       format_real(ev.minCoeff()) + ")");
    }
  }
  return DensityMatrix(std::move(grid), std::move(kernel));
}

cplx DensityMatrix::trace() const { return kernel_.trace() * grid_.cell_volume(); }

double DensityMatrix::relative_boundary_magnitude() const {
  const double kmax = kernel_.cwiseAbs().maxCoeff();
  if (kmax == 0.0) return 0.0;
  double m = 0.0;
  for (Eigen::Index i = 0; i < kernel_.rows(); ++i) {
    if (!on_boundary(static_cast<std::size_t>(i), grid_.dof(), grid_.points())) continue;
    m = std::max({m, kernel_.row(i).cwiseAbs().maxCoeff(), kernel_.col(i).cwiseAbs().maxCoeff()});
  }
  return m / kmax;
}

double gram_defect(std::span<const WaveFunction> vectors) {
  double defect = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const cplx g = inner_product(vectors[i], vectors[j]);
      defect = std::max(defect, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return defect;
}

DensityMatrix assemble_density(const SpectralDecomposition& d) {
  if (d.weights.empty() || d.weights.size() != d.vectors.size()) {
    throw InputError("decomposition needs one weight per vector");
  }
  for (double w : d.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be non-negative");
  }
  const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    throw InputError("weights sum to " + format_real(total) + ", expected 1");
  }
  const PhaseSpaceGrid& grid = d.vectors.front().grid();
  for (const auto& v : d.vectors) require_same_grid(grid, v.grid(), "assemble_density");
  if (gram_defect(d.vectors) > 1e-6) throw InputError("vectors are not orthonormal");

  const auto rows = static_cast<Eigen::Index>(grid.position_size());
  Eigen::MatrixXcd basis(rows, static_cast<Eigen::Index>(d.vectors.size()));
  for (std::size_t j = 0; j < d.vectors.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = d.vectors[j].amplitudes() * std::sqrt(d.weights[j]);
  }
  Eigen::MatrixXcd kernel = basis * basis.adjoint();
  return DensityMatrix::from_kernel(grid, std::move(kernel), DensityMatrix::Validation::structural);
}

SpectralDecomposition spectral_decompose(const DensityMatrix& rho, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InputError("threshold must lie in (0, 1)");
  const Eigen::MatrixXcd& k = rho.kernel();
  const double kmax = k.cwiseAbs().maxCoeff();
  if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * kmax) {
    throw InputError("spectral_decompose: kernel is not Hermitian");
  }
  const double vol = rho.grid().cell_volume();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (k + k.adjoint()) * vol);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double lmax = ev.maxCoeff();
  if (ev.minCoeff() < -1e-10 * lmax) {
    throw InputError("spectral_decompose: negative eigenvalue " + format_real(ev.minCoeff()));
  }

  SpectralDecomposition out;
  const double scale = 1.0 / std::sqrt(vol);
  for (Eigen::Index i = ev.size(); i-- > 0;) {
    if (ev[i] <= threshold) {
      out.dropped_mass += std::max(ev[i], 0.0);
      continue;
    }
    Eigen::VectorXcd v = es.eigenvectors().col(i) * scale;
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (std::abs(v[j]) > best) {
        best = std::abs(v[j]);
        arg = j;
      }
    }
    v *= std::conj(v[arg]) / best;
    v[arg] = best;
    out.weights.push_back(ev[i]);
    out.vectors.emplace_back(rho.grid(), std::move(v));
  }
  return out;
}

DensityMatrix pure_density(const WaveFunction& psi) {
  return assemble_density(SpectralDecomposition{{1.0}, {psi}, 0.0});
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  if (!a.grid().compatible(b.grid())) throw InputError("tensor_product: grid mismatch");
  const PhaseSpaceGrid joint = a.grid().with_dof(a.grid().dof() + b.grid().dof());
  Eigen::MatrixXcd k = Eigen::kroneckerProduct(a.kernel(), b.kernel());
  return DensityMatrix::from_kernel(joint, std::move(k), DensityMatrix::Validation::structural);
}

DensityMatrix partial_trace_operator(const DensityMatrix& rho, const Partition& partition) {
  const PhaseSpaceGrid& grid = rho.grid();
  if (!partition.bipartite() || partition.dof() != grid.dof()) {
    throw InputError("partial_trace_operator: partition inconsistent with the grid");
  }
  const auto na = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_a));
  const auto nb = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_b));
  const double vol_b = std::pow(grid.dx(), partition.n_b);
  const Eigen::MatrixXcd& k = rho.kernel();
  Eigen::MatrixXcd ka = Eigen::MatrixXcd::Zero(na, na);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      cplx acc = 0.0;
      for (Eigen::Index b = 0; b < nb; ++b) acc += k(i * nb + b, j * nb + b);
      ka(i, j) = acc * vol_b;
    }
  }
  return DensityMatrix::from_kernel(grid.with_dof(partition.n_a), std::move(ka));
}

Eigen::MatrixXcd partial_trace_in_basis(const DensityMatrix& rho, const Partition& partition,
                                        std::span<const WaveFunction> b_basis) {
  const PhaseSpaceGrid& grid = rho.grid();
  if (!partition.bipartite() || partition.dof() != grid.dof()) {
    throw InputError("partial_trace_in_basis: partition inconsistent with the grid");
  }
  const PhaseSpaceGrid b_grid = grid.with_dof(partition.n_b);
  const auto na = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_a));
  const auto nb = static_cast<Eigen::Index>(ipow(grid.points(), partition.n_b));
  Eigen::MatrixXcd basis(nb, static_cast<Eigen::Index>(b_basis.size()));
  for (std::size_t j = 0; j < b_basis.size(); ++j) {
    require_same_grid(b_grid, b_basis[j].grid(), "partial_trace_in_basis");
    basis.col(static_cast<Eigen::Index>(j)) = b_basis[j].amplitudes();
  }
  // sum_j conj(b_j(u)) K(.u, .v) b_j(v) = sum_{u,v} K(.u, .v) P(v, u), P = B B^†.
  const Eigen::MatrixXcd proj = basis * basis.adjoint();
  const double vol2 = std::pow(grid.dx(), 2 * partition.n_b);
  const Eigen::MatrixXcd& k = rho.kernel();
  Eigen::MatrixXcd ka(na, na);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      const auto block = k.block(i * nb, j * nb, nb, nb);
      ka(i, j) = block.cwiseProduct(proj.transpose()).sum() * vol2;
    }
  }
  return ka;
}

double purity(const DensityMatrix& rho) {
  const double vol = rho.grid().cell_volume();
  return rho.kernel().squaredNorm() * vol * vol;
}

}  // namespace wigmarg
