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

#include "wigmarg/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "wigmarg/error.hpp"
#include "wigmarg/lattice.hpp"
#include "wigmarg/parallel.hpp"

namespace wigmarg {

template <class T>
PhaseSpaceFunction<T>::PhaseSpaceFunction(PhaseSpaceGrid grid, std::vector<T> values,
                                          std::optional<Partition> partition)
    : grid_(std::move(grid)), partition_(partition), values_(std::move(values)) {
  if (values_.size() != grid_.phase_size()) {
    throw InputError("phase-space function has " + std::to_string(values_.size()) +
                     " values, grid needs " + std::to_string(grid_.phase_size()));
  }
  if (partition_ && partition_->dof() != grid_.dof()) {
    throw InputError("partition does not match the grid");
  }
}

template <class T>
T PhaseSpaceFunction<T>::integral() const {
  T acc{};
  for (const T& v : values_) acc += v;
  return acc * grid_.phase_cell_volume();
}

template <class T>
double PhaseSpaceFunction<T>::max_abs() const {
  double m = 0.0;
  for (const T& v : values_) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

template class PhaseSpaceFunction<double>;
template class PhaseSpaceFunction<cplx>;

namespace {

// One in-place rank-n transform of extent N per axis. Plans are built with
// FFTW_ESTIMATE | FFTW_UNALIGNED and reused for every block, so the result of a
// block never depends on its address or on the thread executing it.
class FftPlan {
 public:
  FftPlan(int rank, int points, int sign) {
    std::vector<int> dims(rank, points);
    std::vector<cplx> scratch(ipow(points, rank));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(mutex());
    plan_ = fftw_plan_dft(rank, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw NumericalError("FFTW could not create a plan");
  }
  ~FftPlan() {
    std::lock_guard lock(mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(cplx* block) const {
    auto* p = reinterpret_cast<fftw_complex*>(block);
    fftw_execute_dft(plan_, p, p);
  }

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  fftw_plan plan_;
};

// (-1)^(sum of indices) for a flat multi-index over `rank` axes.
int parity_sign(std::size_t flat, int rank, int points) {
  int s = 0;
  for (int a = 0; a < rank; ++a) {
    s += static_cast<int>(flat % static_cast<std::size_t>(points));
    flat /= static_cast<std::size_t>(points);
  }
  return (s % 2 == 0) ? 1 : -1;
}

// Centred DFT over the slot axes of every x-block:
//   out_k = scale * sum_m exp(sign * 2 pi i (k - N/2)(m) / N) g_m, m = s - N/2,
// realised as a plain FFT with (-1)^s pre- and (-1)^(k + N/2) post-factors.
void centred_dft_blocks(std::vector<cplx>& data, int rank, int points, int sign, double scale) {
  const std::size_t block = ipow(points, rank);
  const std::size_t blocks = data.size() / block;
  const int half_sign = ((points / 2) * rank) % 2 == 0 ? 1 : -1;
  std::vector<double> pre(block);
  for (std::size_t s = 0; s < block; ++s) pre[s] = parity_sign(s, rank, points);
  const FftPlan plan(rank, points, sign);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      cplx* g = data.data() + j * block;
      for (std::size_t s = 0; s < block; ++s) g[s] *= pre[s];
      plan.execute(g);
      for (std::size_t k = 0; k < block; ++k) g[k] *= pre[k] * half_sign * scale;
    }
  });
}

// Fills G(j, s) = g_j(m), m = s - N/2 per axis, from term(h_plus, h_minus)
// evaluated on the half-step lattice (h = 2j ± m). Axes at m = -N/2 average the
// ±N/2 samples. `accept(m)` selects which slots this pass fills.
template <class Term, class Accept>
void fill_y_samples(std::vector<cplx>& g, int rank, int points, Term&& term, Accept&& accept) {
  const std::size_t block = ipow(points, rank);
  const int half = points / 2;
  parallel_for(block, [&](std::size_t begin, std::size_t end) {
    std::vector<int> j(rank), s(rank), m(rank), hp(rank), hm(rank);
    std::vector<int> edge;
    for (std::size_t jf = begin; jf < end; ++jf) {
      unflatten_index(jf, points, j);
      for (std::size_t sf = 0; sf < block; ++sf) {
        unflatten_index(sf, points, s);
        edge.clear();
        for (int a = 0; a < rank; ++a) {
          m[a] = s[a] - half;
          if (s[a] == 0) edge.push_back(a);
        }
        if (!accept(m)) continue;
        cplx acc = 0.0;
        const unsigned combos = 1u << edge.size();
        for (unsigned c = 0; c < combos; ++c) {
          for (std::size_t e = 0; e < edge.size(); ++e) m[edge[e]] = (c >> e) & 1u ? half : -half;
          bool inside = true;
          for (int a = 0; a < rank && inside; ++a) {
            hp[a] = 2 * j[a] + m[a];
            hm[a] = 2 * j[a] - m[a];
            inside = hp[a] >= 0 && hp[a] < 2 * points && hm[a] >= 0 && hm[a] < 2 * points;
          }
          if (inside) acc += term(hp, hm);
        }
        g[jf * block + sf] = acc / static_cast<double>(combos);
      }
    }
  });
}

unsigned parity_mask(const std::vector<int>& m) {
  unsigned v = 0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    if ((m[a] % 2 + 2) % 2 == 1) v |= 1u << a;
  }
  return v;
}

int fft_sign(const TransformOptions& options) {
  return options.negate_phase ? FFTW_BACKWARD : FFTW_FORWARD;
}

double max_imag(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c.imag()));
  return m;
}

double max_real(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c.real()));
  return m;
}

WignerGrid to_real(const PhaseSpaceGrid& grid, const std::vector<cplx>& v, double scale,
                   const char* what) {
  const double re = max_real(v);
  const double im = max_imag(v);
  if (im > 1e-10 * std::max(re, 1e-300)) {
    throw NumericalError(std::string(what) + ": imaginary residue " + format_real(im / re) +
                         " exceeds 1e-10");
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real() * scale;
  return WignerGrid(grid, std::move(out));
}

}  // namespace

CrossWignerGrid cross_wigner(const WaveFunction& phi, const WaveFunction& psi,
                             const TransformOptions& options) {
  if (!(phi.grid() == psi.grid())) throw InputError("cross_wigner: grid mismatch");
  if (phi.boundary_amplitude() >= 1e-10 || psi.boundary_amplitude() >= 1e-10) {
    throw InputError("cross_wigner: state is not negligible at the grid boundary");
  }
  const PhaseSpaceGrid& grid = phi.grid();
  const int n = grid.dof();
  const int points = grid.points();
  const Eigen::VectorXcd up_phi = lattice::upsample_half_step(phi.amplitudes(), n, points);
  const Eigen::VectorXcd up_psi = lattice::upsample_half_step(psi.amplitudes(), n, points);

  std::vector<cplx> g(grid.phase_size());
  const int fine = 2 * points;
  fill_y_samples(
      g, n, points,
      [&](const std::vector<int>& hp, const std::vector<int>& hm) {
        return up_phi[static_cast<Eigen::Index>(flat_index(hp, fine))] *
               std::conj(up_psi[static_cast<Eigen::Index>(flat_index(hm, fine))]);
      },
      [](const std::vector<int>&) { return true; });

  const double scale = grid.cell_volume() / std::pow(2.0 * std::numbers::pi * grid.hbar(), n);
  centred_dft_blocks(g, n, points, fft_sign(options), scale);
  return CrossWignerGrid(grid, std::move(g));
}

WignerGrid wigner_transform(const WaveFunction& psi, const TransformOptions& options) {
  CrossWignerGrid w = cross_wigner(psi, psi, options);
  return to_real(psi.grid(), w.values(), 1.0, "wigner_transform");
}

SymbolGrid weyl_symbol_of_kernel(const PhaseSpaceGrid& grid, const Eigen::MatrixXcd& kernel,
                                 const TransformOptions& options) {
  const std::size_t rows = grid.position_size();
  if (static_cast<std::size_t>(kernel.rows()) != rows ||
      static_cast<std::size_t>(kernel.cols()) != rows) {
    throw InputError("weyl_symbol: kernel shape does not match the grid");
  }
  const int n = grid.dof();
  const int points = grid.points();
  const Eigen::MatrixXcd shift = lattice::half_shift_matrix(points).cast<cplx>();

  std::vector<cplx> g(grid.phase_size());
  // Kernel with the half-cell shift applied to both arguments on the axes in
  // `variant`. Eigen storage is column-major, so K(r, c) sits at r + c*rows,
  // i.e. a row-major tensor over (c_1..c_n, r_1..r_n).
  for (unsigned variant = 0; variant < (1u << n); ++variant) {
    Eigen::MatrixXcd kv = kernel;
    std::span<cplx> view(kv.data(), static_cast<std::size_t>(kv.size()));
    for (int a = 0; a < n; ++a) {
      if (!((variant >> a) & 1u)) continue;
      lattice::apply_along_axis(view, 2 * n, points, a, shift);      // column argument
      lattice::apply_along_axis(view, 2 * n, points, n + a, shift);  // row argument
    }
    // Runs on worker threads: no shared scratch.
    fill_y_samples(
        g, n, points,
        [&](const std::vector<int>& hp, const std::vector<int>& hm) {
          std::size_t fp = 0, fm = 0;
          for (int a = 0; a < n; ++a) {
            fp = fp * static_cast<std::size_t>(points) + static_cast<std::size_t>(hp[a] >> 1);
            fm = fm * static_cast<std::size_t>(points) + static_cast<std::size_t>(hm[a] >> 1);
          }
          return kv(static_cast<Eigen::Index>(fp), static_cast<Eigen::Index>(fm));
        },
        [variant](const std::vector<int>& m) { return parity_mask(m) == variant; });
  }
  centred_dft_blocks(g, n, points, fft_sign(options), grid.cell_volume());
  return SymbolGrid(grid, std::move(g));
}

SymbolGrid weyl_symbol(const DensityMatrix& rho, const TransformOptions& options) {
  return weyl_symbol_of_kernel(rho.grid(), rho.kernel(), options);
}

WignerGrid wigner_of_density(const DensityMatrix& rho, const TransformOptions& options) {
  if (rho.relative_boundary_magnitude() >= 1e-10) {
    throw InputError("wigner_of_density: kernel is not negligible at the grid boundary");
  }
  const PhaseSpaceGrid& grid = rho.grid();
  SymbolGrid q = weyl_symbol_of_kernel(grid, rho.kernel(), options);
  const double scale = 1.0 / std::pow(2.0 * std::numbers::pi * grid.hbar(), grid.dof());
  return to_real(grid, q.values(), scale, "wigner_of_density");
}

DensityMatrix density_from_wigner(const WignerGrid& wigner) {
  const double total = wigner.integral();
  if (!(std::abs(total - 1.0) <= 1e-4)) {
    throw InputError("density_from_wigner: Wigner grid integrates to " + format_real(total) +
                     ", expected 1 within 1e-4");
  }
  const PhaseSpaceGrid& grid = wigner.grid();
  const int n = grid.dof();
  const int points = grid.points();
  const int half = points / 2;
  const std::size_t block = grid.position_size();

  std::vector<cplx> g(wigner.values().begin(), wigner.values().end());
  centred_dft_blocks(g, n, points, FFTW_BACKWARD, std::pow(grid.dp(), n));

  // g(j, s) = kappa(x_j, y = m dx). Even m lands on lattice pairs directly;
  // odd m needs the centre moved by half a cell.
  const Eigen::MatrixXcd shift = lattice::half_shift_matrix(points).cast<cplx>();
  Eigen::MatrixXcd kernel = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(block),
                                                   static_cast<Eigen::Index>(block));
  std::vector<int> s(n), m(n), j(n), ra(n), rb(n);
  std::vector<cplx> slice(block);
  for (std::size_t sf = 0; sf < block; ++sf) {
    unflatten_index(sf, points, s);
    bool edge = false;
    for (int a = 0; a < n; ++a) {
      m[a] = s[a] - half;
      edge = edge || s[a] == 0;
    }
    if (edge) continue;
    for (std::size_t jf = 0; jf < block; ++jf) slice[jf] = g[jf * block + sf];
    for (int a = 0; a < n; ++a) {
      if (m[a] % 2 != 0) lattice::apply_along_axis(slice, n, points, a, shift);
    }
    for (std::size_t jf = 0; jf < block; ++jf) {
      unflatten_index(jf, points, j);
      bool inside = true;
      for (int a = 0; a < n && inside; ++a) {
        const bool odd = m[a] % 2 != 0;
        ra[a] = odd ? j[a] + (m[a] + 1) / 2 : j[a] + m[a] / 2;
        rb[a] = odd ? j[a] - (m[a] - 1) / 2 : j[a] - m[a] / 2;
        inside = ra[a] >= 0 && ra[a] < points && rb[a] >= 0 && rb[a] < points;
      }
      if (!inside) continue;
      kernel(static_cast<Eigen::Index>(flat_index(ra, points)),
             static_cast<Eigen::Index>(flat_index(rb, points))) = slice[jf];
    }
  }
  Eigen::MatrixXcd herm = 0.5 * (kernel + kernel.adjoint());
  const cplx tr = herm.trace() * grid.cell_volume();
  herm /= tr.real();
  return DensityMatrix::from_kernel(grid, std::move(herm), DensityMatrix::Validation::structural);
}

cplx pairing_via_symbol(const SymbolGrid& symbol, const WaveFunction& phi, const WaveFunction& psi,
                        const TransformOptions& options) {
  if (!(symbol.grid() == phi.grid()) || !(symbol.grid() == psi.grid())) {
    throw InputError("pairing_via_symbol: grid mismatch");
  }
  const CrossWignerGrid w = cross_wigner(psi, phi, options);
  cplx acc = 0.0;
  const auto& q = symbol.values();
  const auto& wv = w.values();
  for (std::size_t i = 0; i < q.size(); ++i) acc += q[i] * wv[i];
  return acc * symbol.grid().phase_cell_volume();
}

TraceResult trace_via_integral(const SymbolGrid& symbol) {
  const PhaseSpaceGrid& grid = symbol.grid();
  const int n = grid.dof();
  const int points = grid.points();
  TraceResult out;
  out.value = symbol.integral() / std::pow(2.0 * std::numbers::pi * grid.hbar(), n);

  const double qmax = symbol.max_abs();
  double edge = 0.0;
  std::vector<int> idx(2 * n);
  const auto& v = symbol.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    unflatten_index(i, points, idx);
    if (std::any_of(idx.begin(), idx.end(), [points](int t) { return t == 0 || t == points - 1; })) {
      edge = std::max(edge, std::abs(v[i]));
    }
  }
  out.boundary_magnitude = qmax > 0.0 ? edge / qmax : 0.0;
  out.boundary_decayed = out.boundary_magnitude <= 1e-10;
  return out;
}

WignerGrid marginalize_b(const WignerGrid& wigner, const Partition& partition) {
  const PhaseSpaceGrid& grid = wigner.grid();
  if (!partition.bipartite() || partition.dof() != grid.dof()) {
    throw InputError("marginalize_b: partition inconsistent with the grid");
  }
  if (wigner.partition() && !(*wigner.partition() == partition)) {
    throw InputError("marginalize_b: partition differs from the one recorded on the grid");
  }
  const std::size_t pts = static_cast<std::size_t>(grid.points());
  const std::size_t size_a = ipow(pts, partition.n_a);
  const std::size_t size_b = ipow(pts, partition.n_b);
  const PhaseSpaceGrid grid_a = grid.with_dof(partition.n_a);
  std::vector<double> out(grid_a.phase_size(), 0.0);
  const auto& v = wigner.values();
  // Axis order (x_A, x_B, p_A, p_B); output (x_A, p_A).
  for (std::size_t xa = 0; xa < size_a; ++xa) {
    for (std::size_t xb = 0; xb < size_b; ++xb) {
      for (std::size_t pa = 0; pa < size_a; ++pa) {
        const std::size_t base = (((xa * size_b + xb) * size_a + pa) * size_b);
        double acc = 0.0;
        for (std::size_t pb = 0; pb < size_b; ++pb) acc += v[base + pb];
        out[xa * size_a + pa] += acc;
      }
    }
  }
  const double cell = std::pow(grid.dx() * grid.dp(), partition.n_b);
  for (double& x : out) x *= cell;
  return WignerGrid(grid_a, std::move(out));
}

std::vector<double> marginal_position(const WignerGrid& wigner) {
  const PhaseSpaceGrid& grid = wigner.grid();
  const std::size_t block = grid.position_size();
  const double dp_n = std::pow(grid.dp(), grid.dof());
  std::vector<double> out(block);
  const auto& v = wigner.values();
  for (std::size_t j = 0; j < block; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < block; ++k) acc += v[j * block + k];
    out[j] = acc * dp_n;
  }
  return out;
}

SymbolGrid sample_symbol(const PhaseSpaceGrid& grid,
                         const std::function<cplx(std::span<const double>)>& f) {
  const int n = grid.dof();
  std::vector<cplx> out(grid.phase_size());
  std::vector<int> idx(2 * n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unflatten_index(i, grid.points(), idx);
    const std::vector<double> z = phase_point(grid, idx);
    out[i] = f(z);
  }
  return SymbolGrid(grid, std::move(out));
}

}  // namespace wigmarg
