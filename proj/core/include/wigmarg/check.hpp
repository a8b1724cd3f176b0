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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// The invariant suite behind `wigmarg check`.
namespace wigmarg {

struct CheckConfig {
  int n_a = 1;
  int n_b = 1;
  int points = 32;
  /// Bounds of the main grid; default ±9 sqrt(hbar).
  std::optional<double> x_min;
  std::optional<double> x_max;
  double hbar = 1.0;
  std::uint64_t seed = 1;
  /// Relative tolerance of the marginalization equivalence.
  double tol = 1e-6;
  /// Flip the Fourier sign of every forward transform (negative control).
  bool sabotage = false;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckReport {
  CheckConfig config;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Runs every check. Library errors raised inside a check are recorded as a
/// failure of that check (residual +inf) rather than propagated; invalid
/// configurations throw InputError before anything runs.
CheckReport run_check(const CheckConfig& config);

/// Pretty-printed JSON with a fixed field order and shortest round-trip
/// doubles. Contains no timings, so equal inputs give equal bytes.
std::string report_json(const CheckReport& report);

}  // namespace wigmarg
