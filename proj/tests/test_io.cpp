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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "wigmarg/error.hpp"
#include "wigmarg/states.hpp"

namespace {

using namespace wigmarg;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / "wigmarg_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

TEST(Io, DensityRoundTripIsBitExact) {
  const PhaseSpaceGrid g = default_grid(2, 12, 0.7);
  Rng rng(61);
  const DensityMatrix rho = random_mixed(g.with_dof(2), 3, rng);
  const fs::path path = scratch("rho.wqs");
  io::write_density(path, rho, Partition{1, 1});
  const io::LoadedDensity back = io::read_density(path);
  EXPECT_EQ(back.rho.kernel(), rho.kernel());
  ASSERT_TRUE(back.partition.has_value());
  EXPECT_EQ(back.partition->n_a, 1);
  EXPECT_TRUE(back.rho.grid().compatible(g));
  EXPECT_EQ(io::probe(path), io::FileKind::density);

  const std::string first = slurp(path);
  io::write_density(path, rho, Partition{1, 1});
  EXPECT_EQ(first, slurp(path));
}

TEST(Io, HeaderIsSingleJsonLineWithFieldOrder) {
  const std::string h = io::header_line(make_grid(1, 8, -2.0, 2.0, 1.0), std::nullopt, "wigner");
  EXPECT_EQ(h, R"({"version":1,"n":1,"N":8,"x_min":-2.0,"x_max":2.0,"hbar":1.0,"n_a":1,"n_b":0,"kind":"wigner","axes":["x1","p1"]})");
}

TEST(Io, PayloadIsLittleEndianFloat64) {
  const PhaseSpaceGrid g = make_grid(1, 8, -2.0, 2.0, 1.0);
  std::vector<double> v(64, 0.0);
  v[0] = 1.0;
  const fs::path path = scratch("w.wig");
  io::write_wigner(path, WignerGrid(g, v));
  const std::string bytes = slurp(path);
  const std::string payload = bytes.substr(bytes.find('\n') + 1);
  ASSERT_EQ(payload.size(), 64u * 8u);
  const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
  EXPECT_EQ(std::memcmp(payload.data(), one, 8), 0);
  EXPECT_EQ(io::read_wigner(path).values(), v);
}

TEST(Io, WaveFunctionReadsAsPureDensity) {
  const PhaseSpaceGrid g = default_grid(1, 16, 1.0);
  Rng rng(62);
  const WaveFunction psi = random_packet(g, rng);
  const fs::path path = scratch("psi.wqs");
  io::write_wavefunction(path, psi);
  EXPECT_EQ(io::read_wavefunction(path).psi.amplitudes(), psi.amplitudes());
  EXPECT_EQ(io::probe(path), io::FileKind::wavefunction);
  EXPECT_LE((io::read_density(path).rho.kernel() - pure_density(psi).kernel()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(io::read_wigner(path), InputError);
}

TEST(Io, CovarianceRoundTripAndLayout) {
  Rng rng(63);
  const CovarianceMatrix cov = random_covariance(Partition{1, 1}, 0.5, rng);
  const fs::path path = scratch("cov.json");
  io::write_covariance(path, cov);
  const CovarianceMatrix back = io::read_covariance(path);
  EXPECT_EQ(back.sigma, cov.sigma);
  EXPECT_EQ(back.hbar, 0.5);
  EXPECT_EQ(back.partition.n_b, 1);
  EXPECT_EQ(io::probe(path), io::FileKind::covariance);
  const std::string text = slurp(path);
  EXPECT_EQ(text.rfind("{\n  \"version\": 1,\n  \"hbar\": 0.5,", 0), 0u);
  std::istringstream lines(text);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) rows += line.rfind("    [", 0) == 0;
  EXPECT_EQ(rows, 4);
}

TEST(Io, CsvHasHeaderAndBlockSeparators) {
  const PhaseSpaceGrid g = make_grid(1, 8, -2.0, 2.0, 1.0);
  const fs::path path = scratch("w.csv");
  io::write_wigner_csv(path, WignerGrid(g, std::vector<double>(64, 0.25)));
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# x,p,value");
  std::getline(in, line);
  EXPECT_EQ(line, "-2,-6.2831853071795862,0.25");
  int blank = 0, data = 0;
  while (std::getline(in, line)) (line.empty() ? blank : data)++;
  EXPECT_EQ(data, 63);
  EXPECT_EQ(blank, 8);
}

TEST(Io, RejectsCorruptFiles) {
  const PhaseSpaceGrid g = default_grid(1, 8, 1.0, 6.0);
  const fs::path good = scratch("good.wig");
  io::write_wigner(good, WignerGrid(g, std::vector<double>(64, 0.0)));
  const std::string bytes = slurp(good);
  const std::string header = bytes.substr(0, bytes.find('\n'));
  const std::string payload = bytes.substr(bytes.find('\n') + 1);
  const fs::path bad = scratch("bad.wig");

  spit(bad, header + "\n" + payload.substr(8));
  EXPECT_THROW(io::read_wigner(bad), InputError);
  spit(bad, "{not json\n" + payload);
  EXPECT_THROW(io::read_wigner(bad), InputError);
  spit(bad, "no newline at all");
  EXPECT_THROW(io::read_wigner(bad), InputError);

  std::string v2 = header;
  v2.replace(v2.find("\"version\":1"), 11, "\"version\":2");
  spit(bad, v2 + "\n" + payload);
  EXPECT_THROW(io::read_wigner(bad), InputError);

  std::string odd = header;
  odd.replace(odd.find("\"N\":8"), 5, "\"N\":7");
  spit(bad, odd + "\n" + payload);
  EXPECT_THROW(io::read_wigner(bad), InputError);

  std::string nan_payload = payload;
  const double nan = std::nan("");
  std::memcpy(nan_payload.data(), &nan, 8);
  spit(bad, header + "\n" + nan_payload);
  EXPECT_THROW(io::read_wigner(bad), InputError);

  EXPECT_THROW(io::read_density(good), InputError);
  EXPECT_THROW(io::read_covariance(good), InputError);
  EXPECT_THROW(io::read_wigner(scratch("missing.wig")), InputError);
  spit(bad, R"({"version":1,"hbar":1,"n_a":1,"n_b":0,"sigma":[[1,0],[0]]})");
  EXPECT_THROW(io::read_covariance(bad), InputError);
}

}  // namespace
