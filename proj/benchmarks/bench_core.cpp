/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <benchmark/benchmark.h>

#include <cmath>

#include "cekit/analytic.hpp"
#include "cekit/cause.hpp"
#include "cekit/channels.hpp"
#include "cekit/vqa.hpp"

namespace {

using namespace cekit;

KrausChannel bench_channel(int d, int rank, std::uint64_t seed) {
  CMatrix u = haar_unitary(d * rank, seed);
  std::vector<CMatrix> ops;
  for (int e = 0; e < rank; ++e) {
    CMatrix k(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) k(r, c) = u(r * rank + e, c * rank + 0);
    ops.push_back(std::move(k));
  }
  return KrausChannel(d, d, std::move(ops));
}

void BM_TraceNorm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  CMatrix u = haar_unitary(d, 1);
  CMatrix h = u + u.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(h));
}
BENCHMARK(BM_TraceNorm)->Arg(4)->Arg(8)->Arg(16);

void BM_ChannelApply(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  KrausChannel ch = bench_channel(d, d, 2);
  CMatrix rho = CMatrix::Identity(d, d) / double(d);
  for (auto _ : state) benchmark::DoNotOptimize(ch.apply(rho));
}
BENCHMARK(BM_ChannelApply)->Arg(2)->Arg(4)->Arg(8);

void BM_CeMaxSeesaw(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  KrausChannel ch = bench_channel(d, 2, 3);
  SolverConfig cfg;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(ce_max(ch, cfg).value);
}
BENCHMARK(BM_CeMaxSeesaw)->Arg(2)->Arg(4)->Arg(8);

void BM_CeMinSearch(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  KrausChannel ch = bench_channel(d, 2, 4);
  SolverConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 200;
  for (auto _ : state) benchmark::DoNotOptimize(ce_min(ch, cfg).value);
}
BENCHMARK(BM_CeMinSearch)->Arg(2)->Arg(3)->Arg(4);

void BM_PartialSwapConstruction(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  DensityMatrix sigma = DensityMatrix::maximally_mixed(d);
  for (auto _ : state)
    benchmark::DoNotOptimize(partial_swap_channel(d, M_PI / 4, sigma).kraus.size());
}
BENCHMARK(BM_PartialSwapConstruction)->Arg(2)->Arg(4)->Arg(8);

void BM_VqaIteration(benchmark::State& state) {
  KrausChannel ch = bench_channel(8, 2, 5);
  VqaConfig cfg;
  cfg.max_iters = 1;
  cfg.seed = 9;
  for (auto _ : state) benchmark::DoNotOptimize(run_vqa(ch, cfg).estimate);
}
BENCHMARK(BM_VqaIteration);

}  // namespace

BENCHMARK_MAIN();
