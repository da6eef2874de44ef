#include <benchmark/benchmark.h>

#include "chaplygin/brackets.hpp"
#include "chaplygin/dynamics.hpp"
#include "chaplygin/verify.hpp"

namespace {

using namespace chaplygin;

const SphereParams kParams{};
const ReducedState kState{Vec3(1.0, -0.5, 0.7), Vec3(0.3, -0.4, 0.866).normalized()};

void BM_Coefficients(benchmark::State& state) {
  const BracketTable table = BracketTable::of(static_cast<BracketVariant>(state.range(0)), kParams);
  for (auto _ : state) benchmark::DoNotOptimize(table.coefficients(kState));
}
BENCHMARK(BM_Coefficients)->Arg(0)->Arg(1)->Arg(2);

void BM_Partials(benchmark::State& state) {
  const BracketTable table = BracketTable::of(static_cast<BracketVariant>(state.range(0)), kParams);
  for (auto _ : state) benchmark::DoNotOptimize(table.partials(kState));
}
BENCHMARK(BM_Partials)->Arg(0)->Arg(1)->Arg(2);

void BM_MaxJacobiator(benchmark::State& state) {
  const BracketTable table = BracketTable::scaled(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(brackets::max_jacobiator(table, kState));
}
BENCHMARK(BM_MaxJacobiator);

void BM_Rk4Step(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  OdeSystem sys;
  VecX x;
  FullState full;
  full.g = so3::rotation_with_poisson_vector(kState.gamma);
  full.K = kState.K;
  switch (kind) {
    case ModelKind::reduced:
      sys = dynamics::reduced_system(kParams);
      x = to_vector(kState);
      break;
    case ModelKind::full:
      sys = dynamics::full_system(kParams);
      x = dynamics::to_vector(full);
      break;
    case ModelKind::multiplier:
      sys = dynamics::multiplier_system(kParams);
      x = dynamics::to_vector(dynamics::consistent_multiplier_state(kParams, full));
      break;
    case ModelKind::rescaled:
      sys = dynamics::rescaled_system(kParams);
      x = to_vector(kState);
      break;
  }
  for (auto _ : state) {
    x = dynamics::rk4_step(sys, x, 1e-3);
    benchmark::DoNotOptimize(x);
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Rk4Step)->DenseRange(0, 3);

void BM_JacobiSuite(benchmark::State& state) {
  const verify::SampleSpec spec{static_cast<int>(state.range(0)), 1, 3.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify::jacobi_suite(kParams, BracketVariant::scaled, spec));
  }
}
BENCHMARK(BM_JacobiSuite)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
