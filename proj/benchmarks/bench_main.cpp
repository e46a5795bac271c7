#include <benchmark/benchmark.h>

#include "korovkin/bounds.hpp"
#include "korovkin/iterate.hpp"
#include "korovkin/operators.hpp"
#include "korovkin/smoothness.hpp"

using namespace korovkin;

namespace {

void converge_bernstein(benchmark::State& state) {
  const auto op = make_bernstein(static_cast<unsigned>(state.range(0)));
  const IterationEngine engine(op, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(converge_limit(engine, 1e-10));
}
BENCHMARK(converge_bernstein)->Arg(5)->Arg(20)->Arg(80)->Unit(benchmark::kMicrosecond);

void apply_power_grid(benchmark::State& state) {
  const IterationEngine engine(make_bernstein(10), static_cast<std::size_t>(state.range(0)));
  const auto f = FunctionSpec::sine_pi();
  for (auto _ : state) benchmark::DoNotOptimize(engine.apply_power(f, 32));
}
BENCHMARK(apply_power_grid)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void modulus_table(benchmark::State& state) {
  const auto f = FunctionSpec::sqrt_fn();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Modulus(f, n));
}
BENCHMARK(modulus_table)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void verify_cell(benchmark::State& state) {
  const auto an = analyze(parse_operator("king:4"), {1024});
  const auto f = FunctionSpec::abs_shift(0.5);
  const Modulus mod(f);
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify(an, f, mod, m, default_slack()));
}
BENCHMARK(verify_cell)->Arg(1)->Arg(16)->Unit(benchmark::kMicrosecond);

void zhuk_smoothing(benchmark::State& state) {
  const auto f = FunctionSpec::abs_shift(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(zhuk(f, 0.1, 1024));
}
BENCHMARK(zhuk_smoothing)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
