/*
 Copyright 2026 The hovi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
// Serial reference against the OpenMP path for each parallel kernel.
// Run with --benchmark_filter=... ; the Exec argument is 0 (serial) or 1.

#include <benchmark/benchmark.h>

#include "hovi/checks.hpp"
#include "hovi/hager.hpp"
#include "hovi/order_study.hpp"
#include "hovi/parallel.hpp"
#include "hovi/transcription.hpp"

using namespace hovi;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::Serial : Exec::Parallel;
}

void BM_FdJacobianConstraints(benchmark::State& state) {
  const Transcription nlp(hager_problem(parse_hager_variant("c3t3"), 1.0, 32));
  const Vec x = Vec::LinSpaced(nlp.layout().num_vars, -0.5, 0.5);
  const VecFn fn = [&](const Vec& z) { return nlp.constraints(z); };
  for (auto _ : state) benchmark::DoNotOptimize(fd_jacobian(fn, x, 1e-6, exec_of(state)));
}

void BM_HagerSweep(benchmark::State& state) {
  const HagerVariant v = parse_hager_variant("c3t3");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_hager_experiment(v, 1.0, {8, 16, 32}, {}, exec_of(state)));
  }
}

void BM_OrderStudy(benchmark::State& state) {
  const OrderProblem prob = order_problem("kepler", 2.0);
  StepperConfig cfg;
  cfg.kind = SchemeKind::Sprk;
  cfg.scheme = make_scheme(Family::GaussLegendre, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measure_order(prob, cfg, {0.1, 0.05, 0.025, 0.0125}, exec_of(state)));
  }
}

void BM_VerletCheck(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verlet_check(1000, 1, 0.1, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_FdJacobianConstraints)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HagerSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrderStudy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerletCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
