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

#include "wigmarg/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

#include "wigmarg/error.hpp"

namespace wigmarg::io {
namespace {

using ordered_json = nlohmann::ordered_json;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InputError(std::string(what) + " is not finite");
}

void append_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

double read_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<double>(bits);
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw InputError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

ordered_json grid_json(const PhaseSpaceGrid& grid, std::optional<Partition> partition) {
  if (partition && partition->dof() != grid.dof()) throw InputError("partition does not match grid");
  const Partition p = partition.value_or(Partition{grid.dof(), 0});
  ordered_json j;
  j["version"] = 1;
  j["n"] = grid.dof();
  j["N"] = grid.points();
  j["x_min"] = grid.x_min();
  j["x_max"] = grid.x_max();
  j["hbar"] = grid.hbar();
  j["n_a"] = p.n_a;
  j["n_b"] = p.n_b;
  return j;
}

struct Parsed {
  ordered_json header;
  std::string_view payload;
};

Parsed split(const std::string& bytes, const std::filesystem::path& path) {
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) throw InputError(path.string() + ": missing header line");
  Parsed p;
  try {
    p.header = ordered_json::parse(bytes.substr(0, nl));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": malformed header: " + e.what());
  }
  p.payload = std::string_view(bytes).substr(nl + 1);
  return p;
}

struct GridHeader {
  PhaseSpaceGrid grid;
  std::optional<Partition> partition;
  std::string kind;
};

GridHeader parse_grid(const ordered_json& h, const std::filesystem::path& path) {
  try {
    if (h.at("version").get<int>() != 1) throw InputError(path.string() + ": unsupported version");
    PhaseSpaceGrid grid = make_grid(h.at("n").get<int>(), h.at("N").get<int>(), h.at("x_min").get<double>(),
                                    h.at("x_max").get<double>(), h.at("hbar").get<double>());
    const int na = h.at("n_a").get<int>();
    const int nb = h.at("n_b").get<int>();
    if (na + nb != grid.dof()) throw InputError(path.string() + ": n_a + n_b != n");
    std::optional<Partition> part;
    if (nb > 0) part = make_partition(na, nb);
    return GridHeader{grid, part, h.at("kind").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": bad header field: " + e.what());
  }
}

std::vector<double> decode(std::string_view payload, std::size_t count, const std::filesystem::path& path) {
  if (payload.size() != count * 8) {
    throw InputError(path.string() + ": payload has " + std::to_string(payload.size()) + " bytes, expected " +
                     std::to_string(count * 8));
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = read_le(payload.data() + 8 * i);
    require_finite(out[i], "payload value");
  }
  return out;
}

}  // namespace

FileKind probe(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto nl = bytes.find('\n');
  const std::string first = bytes.substr(0, nl);
  ordered_json h;
  try {
    h = ordered_json::parse(first);
  } catch (const nlohmann::json::exception&) {
    try {
      h = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ": not a wigmarg file: " + e.what());
    }
  }
  if (h.contains("sigma")) return FileKind::covariance;
  if (!h.contains("kind")) throw InputError(path.string() + ": header has no kind");
  const std::string kind = h["kind"].get<std::string>();
  if (kind == "density") return FileKind::density;
  if (kind == "wavefunction") return FileKind::wavefunction;
  if (kind == "wigner") return FileKind::wigner;
  throw InputError(path.string() + ": unknown kind " + kind);
}

std::string header_line(const PhaseSpaceGrid& grid, std::optional<Partition> partition, std::string_view kind) {
  ordered_json j = grid_json(grid, partition);
  j["kind"] = std::string(kind);
  if (kind == "wigner") {
    std::vector<std::string> axes;
    for (int a = 1; a <= grid.dof(); ++a) axes.push_back("x" + std::to_string(a));
    for (int a = 1; a <= grid.dof(); ++a) axes.push_back("p" + std::to_string(a));
    j["axes"] = axes;
  }
  return j.dump();
}

void write_density(const std::filesystem::path& path, const DensityMatrix& rho, std::optional<Partition> partition) {
  std::string out = header_line(rho.grid(), partition, "density") + "\n";
  const auto& k = rho.kernel();
  out.reserve(out.size() + static_cast<std::size_t>(k.size()) * 16);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      append_le(out, k(i, j).real());
      append_le(out, k(i, j).imag());
    }
  }
  write_file(path, out);
}

void write_wavefunction(const std::filesystem::path& path, const WaveFunction& psi,
                        std::optional<Partition> partition) {
  std::string out = header_line(psi.grid(), partition, "wavefunction") + "\n";
  for (const cplx& c : psi.amplitudes()) {
    append_le(out, c.real());
    append_le(out, c.imag());
  }
  write_file(path, out);
}

void write_wigner(const std::filesystem::path& path, const WignerGrid& wigner) {
  std::string out = header_line(wigner.grid(), wigner.partition(), "wigner") + "\n";
  out.reserve(out.size() + wigner.values().size() * 8);
  for (double v : wigner.values()) {
    require_finite(v, "Wigner value");
    append_le(out, v);
  }
  write_file(path, out);
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& wigner) {
  const PhaseSpaceGrid& grid = wigner.grid();
  const int n = grid.dof();
  std::string out = "# ";
  if (n == 1) {
    out += "x,p,value\n";
  } else {
    for (int a = 1; a <= n; ++a) out += "x" + std::to_string(a) + ",";
    for (int a = 1; a <= n; ++a) out += "p" + std::to_string(a) + ",";
    out += "value\n";
  }
  std::vector<int> idx(2 * n);
  char buf[64];
  const auto& v = wigner.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    unflatten_index(i, grid.points(), idx);
    const std::vector<double> z = phase_point(grid, idx);
    for (double c : z) {
      std::snprintf(buf, sizeof buf, "%.17g,", c);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", v[i]);
    out += buf;
    if (idx.back() == grid.points() - 1) out += "\n";
  }
  write_file(path, out);
}

void write_covariance(const std::filesystem::path& path, const CovarianceMatrix& cov) {
  require_finite(cov.hbar, "hbar");
  ordered_json j;
  j["version"] = 1;
  j["hbar"] = cov.hbar;
  j["n_a"] = cov.partition.n_a;
  j["n_b"] = cov.partition.n_b;
  // One matrix row per line; numbers go through the JSON serializer so they
  // round-trip exactly.
  std::string text = j.dump(2);
  text.pop_back();  // closing brace
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  text += ",\n  \"sigma\": [\n";
  for (Eigen::Index r = 0; r < cov.sigma.rows(); ++r) {
    text += "    [";
    for (Eigen::Index c = 0; c < cov.sigma.cols(); ++c) {
      require_finite(cov.sigma(r, c), "covariance entry");
      if (c > 0) text += ", ";
      text += ordered_json(cov.sigma(r, c)).dump();
    }
    text += r + 1 < cov.sigma.rows() ? "],\n" : "]\n";
  }
  text += "  ]\n}\n";
  write_file(path, text);
}

LoadedDensity read_density(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const Parsed p = split(bytes, path);
  GridHeader g = parse_grid(p.header, path);
  const std::size_t rows = g.grid.position_size();
  if (g.kind == "wavefunction") {
    LoadedWave w = read_wavefunction(path);
    return LoadedDensity{pure_density(w.psi), w.partition};
  }
  if (g.kind != "density") throw InputError(path.string() + ": expected a density, found " + g.kind);
  if (rows > kMaxKernelRows) throw InputError(path.string() + ": kernel exceeds the row cap");
  const std::vector<double> raw = decode(p.payload, rows * rows * 2, path);
  Eigen::MatrixXcd k(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) {
      const std::size_t at = 2 * (i * rows + j);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(raw[at], raw[at + 1]);
    }
  }
  return LoadedDensity{DensityMatrix::from_kernel(g.grid, std::move(k)), g.partition};
}

LoadedWave read_wavefunction(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const Parsed p = split(bytes, path);
  GridHeader g = parse_grid(p.header, path);
  if (g.kind != "wavefunction") throw InputError(path.string() + ": expected a wavefunction, found " + g.kind);
  const std::size_t size = g.grid.position_size();
  const std::vector<double> raw = decode(p.payload, size * 2, path);
  Eigen::VectorXcd a(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) a[static_cast<Eigen::Index>(i)] = cplx(raw[2 * i], raw[2 * i + 1]);
  return LoadedWave{WaveFunction(g.grid, std::move(a)), g.partition};
}

WignerGrid read_wigner(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const Parsed p = split(bytes, path);
  GridHeader g = parse_grid(p.header, path);
  if (g.kind != "wigner") throw InputError(path.string() + ": expected a wigner grid, found " + g.kind);
  std::vector<double> values = decode(p.payload, g.grid.phase_size(), path);
  return WignerGrid(g.grid, std::move(values), g.partition);
}

CovarianceMatrix read_covariance(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
    if (j.at("version").get<int>() != 1) throw InputError(path.string() + ": unsupported version");
    const int na = j.at("n_a").get<int>();
    const int nb = j.at("n_b").get<int>();
    const double hbar = j.at("hbar").get<double>();
    const auto& rows = j.at("sigma");
    const auto dim = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd sigma(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != dim) throw InputError(path.string() + ": sigma is not square");
      for (Eigen::Index c = 0; c < dim; ++c) sigma(r, c) = rows[r][c].get<double>();
    }
    return make_covariance(std::move(sigma), make_partition(na, nb), hbar);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": malformed covariance file: " + e.what());
  }
}

}  // namespace wigmarg::io
