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

// wigmarg: state generation, transforms, the invariant suite and export.
//
// Exit codes: 0 success, 1 a check failed, 2 bad input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigmarg/check.hpp"
#include "wigmarg/error.hpp"
#include "wigmarg/gaussian.hpp"
#include "wigmarg/hilbert.hpp"
#include "wigmarg/io.hpp"
#include "wigmarg/purify.hpp"
#include "wigmarg/states.hpp"
#include "wigmarg/wigner.hpp"

namespace fs = std::filesystem;
using namespace wigmarg;
using nlohmann::ordered_json;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string kind;
  int n = 1;
  std::optional<int> points;
  std::optional<double> x_min;
  std::optional<double> x_max;
  double hbar = 1.0;
  std::optional<int> n_a;
  std::optional<int> n_b;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string in;
  std::string out;
  std::string csv;
  std::string report;
  int rank = 3;
  double r = 0.5;
  double x0 = 0.0;
  double p0 = 0.0;
  bool sabotage = false;
};

PhaseSpaceGrid grid_for(const RunConfig& cfg, int n, int default_points) {
  const double half = 9.0 * std::sqrt(cfg.hbar);
  return make_grid(n, cfg.points.value_or(default_points), cfg.x_min.value_or(-half), cfg.x_max.value_or(half),
                   cfg.hbar);
}

// Grid for sampling covariances. Without explicit bounds the half width is
// sqrt((N/2 - 1) pi hbar), where the position and momentum reach coincide.
PhaseSpaceGrid lattice_grid_for(const RunConfig& cfg, const CovarianceMatrix& cov) {
  // Default N: at least 64, and enough that the balanced lattice reaches 8 sigma.
  const double reach = 8.0 * std::sqrt(cov.sigma.diagonal().maxCoeff());
  const int fit = 2 * static_cast<int>(std::ceil(reach * reach / (std::numbers::pi * cov.hbar) + 1.0));
  const int points = cfg.points.value_or(std::max(64, fit));
  const double half = std::sqrt((points / 2 - 1) * std::numbers::pi * cov.hbar);
  return make_grid(cov.partition.dof(), points, cfg.x_min.value_or(-half), cfg.x_max.value_or(half), cov.hbar);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw InputError("failed writing " + path);
}

void require_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw InputError("--out is required");
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_gen(const RunConfig& cfg) {
  require_out(cfg);
  Rng rng(cfg.seed);
  if (cfg.kind == "gaussian") {
    const Partition part = make_partition(cfg.n_a.value_or(cfg.n), cfg.n_b.value_or(0));
    const CovarianceMatrix cov = random_covariance(part, cfg.hbar, rng);
    require_admissible(cov);
    io::write_covariance(cfg.out, cov);
    return 0;
  }
  if (cfg.kind == "two-mode-squeezed") {
    if (cfg.n_b && *cfg.n_b != cfg.n_a.value_or(1)) throw InputError("two-mode-squeezed needs n_a == n_b");
    io::write_covariance(cfg.out, two_mode_squeezed(cfg.r, cfg.n_a.value_or(1), cfg.hbar));
    return 0;
  }
  if (cfg.kind == "packet") {
    const PhaseSpaceGrid grid = grid_for(cfg, cfg.n, 32);
    const std::vector<double> x0(grid.dof(), cfg.x0), p0(grid.dof(), cfg.p0);
    const std::vector<double> width(grid.dof(), std::sqrt(0.5 * cfg.hbar));
    io::write_density(cfg.out, pure_density(gaussian_wavepacket(grid, x0, p0, width)));
    return 0;
  }
  if (cfg.kind == "mixed") {
    if (cfg.rank < 1) throw InputError("--rank must be positive");
    const PhaseSpaceGrid grid = grid_for(cfg, cfg.n, 32);
    io::write_density(cfg.out, random_mixed(grid, static_cast<std::size_t>(cfg.rank), rng));
    return 0;
  }
  if (cfg.kind == "schmidt") {
    if (cfg.rank < 1) throw InputError("--rank must be positive");
    const Partition part = make_partition(cfg.n_a.value_or(1), cfg.n_b.value_or(1));
    if (!part.bipartite()) throw InputError("schmidt needs n_a >= 1 and n_b >= 1");
    const PhaseSpaceGrid grid = grid_for(cfg, part.dof(), 32);
    const auto weights = random_weights(static_cast<std::size_t>(cfg.rank), rng);
    io::write_density(cfg.out, pure_density(schmidt_state(grid, part, weights, rng)), part);
    return 0;
  }
  throw InputError("unknown state kind '" + cfg.kind + "'");
}

int cmd_check(const RunConfig& cfg) {
  CheckConfig c;
  c.n_a = cfg.n_a.value_or(1);
  c.n_b = cfg.n_b.value_or(1);
  c.points = cfg.points.value_or(32);
  c.x_min = cfg.x_min;
  c.x_max = cfg.x_max;
  c.hbar = cfg.hbar;
  c.seed = cfg.seed;
  c.tol = cfg.tol.value_or(1e-6);
  c.sabotage = cfg.sabotage;
  const CheckReport report = run_check(c);
  const std::string json = report_json(report);
  if (!cfg.report.empty()) write_text(cfg.report, json);
  std::size_t failed = 0;
  for (const auto& r : report.checks) {
    if (!r.passed) ++failed;
    std::printf("%s %-44s residual %-12s tol %g\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                std::isfinite(r.residual) ? format_real(r.residual).c_str() : "error", r.tolerance);
  }
  std::printf("%zu/%zu checks passed\n", report.checks.size() - failed, report.checks.size());
  return report.passed() ? 0 : kCheckFailed;
}

Partition partition_for(const RunConfig& cfg, const std::optional<Partition>& from_file, int dof) {
  if (cfg.n_a || cfg.n_b) {
    const int na = cfg.n_a.value_or(dof - cfg.n_b.value_or(0));
    return make_partition(na, cfg.n_b.value_or(dof - na));
  }
  if (from_file && from_file->bipartite()) return *from_file;
  throw InputError("the input has no bipartite partition; pass --na and --nb");
}

int cmd_reduce(const RunConfig& cfg) {
  require_out(cfg);
  const double tol = cfg.tol.value_or(1e-6);
  double residual = 0.0;
  fs::path wig_path = fs::path(cfg.out).replace_extension(".wig");

  if (io::probe(cfg.in) == io::FileKind::covariance) {
    const CovarianceMatrix cov = io::read_covariance(cfg.in);
    if (!cov.partition.bipartite()) throw InputError("covariance has no B subsystem to trace out");
    const CovarianceMatrix reduced = reduce_gaussian(cov);
    io::write_covariance(cfg.out, reduced);
    // Lattice path: marginal of the sampled joint Gaussian against the
    // sampled reduced Gaussian.
    const PhaseSpaceGrid joint = lattice_grid_for(cfg, cov);
    if (joint.phase_size() > (std::size_t{1} << 24)) {
      throw InputError("lattice cross-check would need " + std::to_string(joint.phase_size()) +
                       " nodes (cap 2^24); lower --N or narrow the state");
    }
    const WignerGrid marginal = marginalize_b(sample_gaussian_wigner(cov, joint), cov.partition);
    const WignerGrid direct = sample_gaussian_wigner(reduced, joint.with_dof(cov.partition.n_a));
    double peak = 0.0;
    for (std::size_t i = 0; i < direct.values().size(); ++i) {
      residual = std::max(residual, std::abs(marginal.values()[i] - direct.values()[i]));
      peak = std::max(peak, std::abs(direct.values()[i]));
    }
    residual /= peak;
    io::write_wigner(wig_path, marginal);
  } else {
    const io::LoadedDensity loaded = io::read_density(cfg.in);
    const Partition part = partition_for(cfg, loaded.partition, loaded.rho.grid().dof());
    const DensityMatrix reduced = partial_trace_operator(loaded.rho, part);
    const WignerGrid marginal = marginalize_b(wigner_of_density(loaded.rho), part);
    const WignerGrid oracle = wigner_of_density(reduced);
    double peak = 0.0;
    for (std::size_t i = 0; i < oracle.values().size(); ++i) {
      residual = std::max(residual, std::abs(marginal.values()[i] - oracle.values()[i]));
      peak = std::max(peak, std::abs(oracle.values()[i]));
    }
    residual /= peak;
    io::write_density(cfg.out, reduced);
    io::write_wigner(wig_path, marginal);
  }

  const bool ok = residual <= tol;
  std::printf("operator path  %s\nwigner path    %s\nresidual       %s\n", cfg.out.c_str(),
              wig_path.string().c_str(), real17(residual).c_str());
  if (!cfg.report.empty()) {
    ordered_json j;
    j["version"] = 1;
    j["operator_path"] = cfg.out;
    j["wigner_path"] = wig_path.string();
    j["residual"] = residual;
    j["tolerance"] = tol;
    j["passed"] = ok;
    write_text(cfg.report, j.dump(2) + "\n");
  }
  return ok ? 0 : kCheckFailed;
}

int cmd_wigner(const RunConfig& cfg) {
  require_out(cfg);
  const TransformOptions opt{cfg.sabotage};
  const auto emit = [&](const WignerGrid& w) {
    io::write_wigner(cfg.out, w);
    if (!cfg.csv.empty()) io::write_wigner_csv(cfg.csv, w);
  };
  switch (io::probe(cfg.in)) {
    case io::FileKind::covariance: {
      const CovarianceMatrix cov = io::read_covariance(cfg.in);
      emit(sample_gaussian_wigner(cov, lattice_grid_for(cfg, cov)));
      break;
    }
    case io::FileKind::wavefunction: {
      const io::LoadedWave loaded = io::read_wavefunction(cfg.in);
      const WignerGrid w = wigner_transform(loaded.psi, opt);
      emit(WignerGrid(w.grid(), w.values(), loaded.partition));
      break;
    }
    case io::FileKind::density: {
      const io::LoadedDensity loaded = io::read_density(cfg.in);
      const WignerGrid w = wigner_of_density(loaded.rho, opt);
      emit(WignerGrid(w.grid(), w.values(), loaded.partition));
      break;
    }
    case io::FileKind::wigner:
      throw InputError(cfg.in + " is already a Wigner file");
  }
  return 0;
}

int cmd_purity(const RunConfig& cfg) {
  if (io::probe(cfg.in) == io::FileKind::covariance) {
    const CovarianceMatrix cov = io::read_covariance(cfg.in);
    const double formula = gaussian_purity(cov);
    const PhaseSpaceGrid grid = lattice_grid_for(cfg, cov);
    const double lattice = purity(density_from_wigner(sample_gaussian_wigner(cov, grid)));
    std::printf("formula  %.12g\nlattice  %.12g\n", formula, lattice);
    return 0;
  }
  const DensityMatrix rho = io::read_density(cfg.in).rho;
  const Eigen::MatrixXcd sq = rho.kernel() * rho.kernel() * rho.grid().cell_volume();
  const cplx phase = trace_via_integral(weyl_symbol_of_kernel(rho.grid(), sq)).value;
  std::printf("operator     %.12g\nphase_space  %.12g\n", purity(rho), phase.real());
  return 0;
}

int cmd_purify(const RunConfig& cfg) {
  require_out(cfg);
  const io::LoadedDensity loaded = io::read_density(cfg.in);
  const PhaseSpaceGrid& a_grid = loaded.rho.grid();
  if (cfg.points && *cfg.points != a_grid.points()) {
    throw InputError("--N " + std::to_string(*cfg.points) + " differs from the input lattice (N = " +
                     std::to_string(a_grid.points()) + "); the joint lattice needs one N");
  }
  const Purification pur = purify(loaded.rho, a_grid.with_dof(cfg.n_b.value_or(1)));
  io::write_wavefunction(cfg.out, pur.psi, pur.partition);

  const Eigen::MatrixXcd back = partial_trace_operator(pure_density(pur.psi), pur.partition).kernel();
  const double trace_residual = (back - loaded.rho.kernel()).cwiseAbs().maxCoeff();
  const WigsumReport ws = verify_wigsum(pur, TransformOptions{cfg.sabotage});
  const bool ok = ws.passed && trace_residual <= 1e-8;

  if (!cfg.report.empty()) {
    ordered_json j;
    j["version"] = 1;
    j["n_a"] = pur.partition.n_a;
    j["n_b"] = pur.partition.n_b;
    j["rank"] = pur.weights.size();
    j["dropped_mass"] = pur.dropped_mass;
    j["schmidt_weights"] = schmidt_weights(pur.psi, pur.partition);
    j["partial_trace_residual"] = trace_residual;
    j["wigsum"] = {{"max_residual", ws.max_residual}, {"max_rhs", ws.max_rhs},
                   {"relative_residual", ws.max_residual / ws.max_rhs}, {"passed", ws.passed}};
    write_text(cfg.report, j.dump(2) + "\n");
  }
  std::printf("rank %zu, partial trace residual %s, wigsum residual %s\n", pur.weights.size(),
              format_real(trace_residual).c_str(), format_real(ws.max_residual / ws.max_rhs).c_str());
  return ok ? 0 : kCheckFailed;
}

// States carry their own lattice and hbar, so commands that read one only take
// the grid used for sampling covariances.
void grid_flags(CLI::App* sub, RunConfig& cfg, bool generates) {
  sub->add_option("--N", cfg.points, "Points per axis (even, >= 8)");
  if (generates) {
    sub->add_option("--xmin", cfg.x_min, "Lower bound of every axis (default -9 sqrt(hbar))");
    sub->add_option("--xmax", cfg.x_max, "Upper bound of every axis (default 9 sqrt(hbar))");
    sub->add_option("--hbar", cfg.hbar, "Reduced Planck constant")->capture_default_str();
  } else {
    sub->add_option("--xmin", cfg.x_min, "Covariance sampling: lower bound (default -sqrt((N/2-1) pi hbar))");
    sub->add_option("--xmax", cfg.x_max, "Covariance sampling: upper bound (default sqrt((N/2-1) pi hbar))");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space partial traces: Wigner marginals against the operator partial trace"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen", "Write a generated state (.wqs) or covariance (JSON)");
  gen->add_option("kind", cfg.kind, "packet | mixed | schmidt | gaussian | two-mode-squeezed")
      ->required()
      ->check(CLI::IsMember({"packet", "mixed", "schmidt", "gaussian", "two-mode-squeezed"}));
  gen->add_option("--n", cfg.n, "Degrees of freedom (packet, mixed, gaussian)")->capture_default_str();
  grid_flags(gen, cfg, true);
  gen->add_option("--na", cfg.n_a, "Degrees of freedom of A");
  gen->add_option("--nb", cfg.n_b, "Degrees of freedom of B");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--rank", cfg.rank, "Rank (mixed) or Schmidt rank (schmidt)")->capture_default_str();
  gen->add_option("--r", cfg.r, "Squeezing parameter (two-mode-squeezed)")->capture_default_str();
  gen->add_option("--x0", cfg.x0, "Packet centre on every axis")->capture_default_str();
  gen->add_option("--p0", cfg.p0, "Packet momentum on every axis")->capture_default_str();
  gen->add_option("--out", cfg.out, "Output path");

  auto* check = app.add_subcommand("check", "Run the invariant suite; exit 0 iff every check passes");
  grid_flags(check, cfg, true);
  check->add_option("--na", cfg.n_a, "Degrees of freedom of A (default 1)");
  check->add_option("--nb", cfg.n_b, "Degrees of freedom of B (default 1)");
  check->add_option("--seed", cfg.seed, "Seed of the state family")->capture_default_str();
  check->add_option("--tol", cfg.tol, "Relative tolerance of the marginalization check (default 1e-6)");
  check->add_option("--report", cfg.report, "Write the JSON report here");
  check->add_flag("--sabotage", cfg.sabotage, "Flip the Fourier sign (negative control)")->group("");

  auto* reduce = app.add_subcommand("reduce", "Trace out B by both paths and report their residual");
  grid_flags(reduce, cfg, false);
  reduce->add_option("--in", cfg.in, "State (.wqs) or covariance (JSON)")->required();
  reduce->add_option("--out", cfg.out, "Reduced state; the Wigner-path marginal goes next to it as .wig");
  reduce->add_option("--na", cfg.n_a, "Override the partition stored in the file");
  reduce->add_option("--nb", cfg.n_b, "Override the partition stored in the file");
  reduce->add_option("--tol", cfg.tol, "Relative residual tolerance (default 1e-6)");
  reduce->add_option("--report", cfg.report, "Write a JSON summary here");

  auto* wigner = app.add_subcommand("wigner", "Wigner distribution of a state or covariance");
  grid_flags(wigner, cfg, false);
  wigner->add_option("--in", cfg.in, "State (.wqs) or covariance (JSON)")->required();
  wigner->add_option("--out", cfg.out, "Output .wig");
  wigner->add_option("--csv", cfg.csv, "Also write gnuplot-ready CSV here");
  wigner->add_flag("--sabotage", cfg.sabotage)->group("");

  auto* purity_cmd = app.add_subcommand("purity", "Purity by two independent paths");
  grid_flags(purity_cmd, cfg, false);
  purity_cmd->add_option("--in", cfg.in, "State (.wqs) or covariance (JSON)")->required();

  auto* purify_cmd = app.add_subcommand("purify", "Purify a state of A onto A x B");
  purify_cmd->add_option("--in", cfg.in, "State of A (.wqs)")->required();
  purify_cmd->add_option("--nb", cfg.n_b, "Degrees of freedom of B (default 1)");
  purify_cmd->add_option("--N", cfg.points, "Must match the input lattice");
  purify_cmd->add_option("--out", cfg.out, "Output wave function (.wqs)");
  purify_cmd->add_option("--report", cfg.report, "Write residuals and Schmidt weights here");
  purify_cmd->add_flag("--sabotage", cfg.sabotage)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (gen->parsed()) return cmd_gen(cfg);
    if (check->parsed()) return cmd_check(cfg);
    if (reduce->parsed()) return cmd_reduce(cfg);
    if (wigner->parsed()) return cmd_wigner(cfg);
    if (purity_cmd->parsed()) return cmd_purity(cfg);
    if (purify_cmd->parsed()) return cmd_purify(cfg);
  } catch (const InputError& e) {
    std::cerr << "wigmarg: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "wigmarg: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kInputError;
}
