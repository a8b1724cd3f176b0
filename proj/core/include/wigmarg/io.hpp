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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wigmarg/gaussian.hpp"
#include "wigmarg/grid.hpp"
#include "wigmarg/hilbert.hpp"
#include "wigmarg/wigner.hpp"

// File formats.
//
// State files (.wqs) and Wigner files (.wig) are one line of UTF-8 JSON
// terminated by '\n', followed by a little-endian float64 block:
//
//   {"version":1,"n":…,"N":…,"x_min":…,"x_max":…,"hbar":…,"n_a":…,"n_b":…,"kind":…}
//
// in exactly that field order. kind "density": N^n x N^n complex kernel,
// row-major, each entry as (re, im). kind "wavefunction": N^n complex
// amplitudes. kind "wigner": an extra "axes" field lists the axis order
// (x1..xn, p1..pn) and N^(2n) real values follow, row-major. An unsplit
// state records n_a = n, n_b = 0.
//
// Covariance files are JSON {"version":1,"hbar":…,"n_a":…,"n_b":…,"sigma":[[…]]}
// with rows and columns ordered (x_A, p_A, x_B, p_B).
namespace wigmarg::io {

enum class FileKind { density, wavefunction, wigner, covariance };

/// Reads just enough of the file to classify it. Throws InputError for
/// anything that is not one of the formats above.
FileKind probe(const std::filesystem::path& path);

/// The header line (without the trailing newline).
std::string header_line(const PhaseSpaceGrid& grid, std::optional<Partition> partition,
                        std::string_view kind);

void write_density(const std::filesystem::path& path, const DensityMatrix& rho,
                   std::optional<Partition> partition = std::nullopt);
void write_wavefunction(const std::filesystem::path& path, const WaveFunction& psi,
                        std::optional<Partition> partition = std::nullopt);
void write_wigner(const std::filesystem::path& path, const WignerGrid& wigner);
/// "x,p,value" rows (x1..xn,p1..pn,value for n > 1) at 17 significant
/// digits, with a blank line after every run of the last axis for gnuplot.
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& wigner);
void write_covariance(const std::filesystem::path& path, const CovarianceMatrix& cov);

struct LoadedDensity {
  DensityMatrix rho;
  std::optional<Partition> partition;
};

struct LoadedWave {
  WaveFunction psi;
  std::optional<Partition> partition;
};

/// Accepts kind "density" or "wavefunction" (returned as a pure state).
LoadedDensity read_density(const std::filesystem::path& path);
LoadedWave read_wavefunction(const std::filesystem::path& path);
WignerGrid read_wigner(const std::filesystem::path& path);
CovarianceMatrix read_covariance(const std::filesystem::path& path);

}  // namespace wigmarg::io
