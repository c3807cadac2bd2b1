// Copyright 2026 The pnphqs Authors
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

#include "pnphqs/pnphqs.hpp"

using namespace pnphqs;

namespace {

Image observation(std::size_t size) {
  const Phantom p = make_phantom(PhantomSpec::standard(size));
  DegradeSpec spec;
  spec.seed = 3;
  return degrade(p.image, spec);
}

void BM_ConvolvePeriodic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image u = observation(n);
  const Psf psf = gaussian_psf(15, 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_periodic(u, psf));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_ConvolvePeriodic)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_UUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image v = observation(n);
  NormalEquationSolver solver(compute_symbols(gaussian_psf(15, 1.2), n, n), v);
  const PriorVariable t = gradient(v);
  const GradientField z = gradient(v);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(&t, 2.0, &z, 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_UUpdate)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ProxTv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GradientField g = gradient(observation(n));
  for (auto _ : state) benchmark::DoNotOptimize(prox_tv(g, TvThreshold{4.0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_ProxTv)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

// Random weights so the zero-residual shortcut is not taken.
void BM_DnCnnInference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto features = static_cast<std::uint32_t>(state.range(1));
  const DnCnnModel model = random_model(DenoiserDomain::image, 16.0, 1, features);
  const Image v = observation(n);
  for (auto _ : state) benchmark::DoNotOptimize(infer_image(model, v));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_DnCnnInference)->Args({64, 16})->Args({64, 64})->Unit(benchmark::kMillisecond);

void BM_TvRun(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image v = observation(n);
  const Psf psf = gaussian_psf(15, 1.2);
  RunConfig cfg;
  cfg.noise_std = 15.0;
  cfg.stop_on_discrepancy = false;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, v, psf));
}
BENCHMARK(BM_TvRun)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
