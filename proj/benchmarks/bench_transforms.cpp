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

#include <benchmark/benchmark.h>

#include "wigmarg/gaussian.hpp"
#include "wigmarg/hilbert.hpp"
#include "wigmarg/states.hpp"
#include "wigmarg/wigner.hpp"

namespace {

using namespace wigmarg;

void BM_WignerTransform(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1.0);
  const WaveFunction psi = ground_state(g);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_transform(psi));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.phase_size()));
}
BENCHMARK(BM_WignerTransform)->Args({1, 64})->Args({1, 256})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_WignerOfDensity(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1.0);
  Rng rng(1);
  const DensityMatrix rho = random_mixed(g, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_of_density(rho));
}
BENCHMARK(BM_WignerOfDensity)->Args({1, 64})->Args({2, 16})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_DensityFromWigner(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(1, static_cast<int>(state.range(0)), 1.0, 12.0);
  Rng rng(2);
  const WignerGrid w = wigner_of_density(random_mixed(g, 3, rng));
  for (auto _ : state) benchmark::DoNotOptimize(density_from_wigner(w));
}
BENCHMARK(BM_DensityFromWigner)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_PartialTrace(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(2, static_cast<int>(state.range(0)), 1.0);
  Rng rng(3);
  const DensityMatrix rho = random_mixed(g, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace_operator(rho, Partition{1, 1}));
}
BENCHMARK(BM_PartialTrace)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MarginalizeB(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(2, static_cast<int>(state.range(0)), 1.0);
  const WignerGrid w = sample_gaussian_wigner(two_mode_squeezed(0.25, 1, 1.0), g);
  for (auto _ : state) benchmark::DoNotOptimize(marginalize_b(w, Partition{1, 1}));
}
BENCHMARK(BM_MarginalizeB)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SpectralDecompose(benchmark::State& state) {
  const PhaseSpaceGrid g = default_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1.0);
  Rng rng(4);
  const DensityMatrix rho = random_mixed(g, 5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(rho));
}
BENCHMARK(BM_SpectralDecompose)->Args({1, 64})->Args({1, 256})->Args({2, 24})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
