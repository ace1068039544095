#include <benchmark/benchmark.h>

#include "ipress/group.hpp"
#include "ipress/loops.hpp"
#include "ipress/pressure.hpp"
#include "ipress/properties.hpp"

using namespace ipress;

static void BM_PseudoInverseRenewal(benchmark::State& state) {
  const auto spec = ShiftSpec::renewal();
  const auto trunc = truncate_prefix(spec, static_cast<std::size_t>(state.range(0)));
  const auto phi = combine(Potential::zero(), Potential::alpha_farey_geometric(), {0.0, -0.5});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pseudo_inverse_pressure(trunc, phi, Potential::constant(1.0), WordCollection::periodic_at(1)).value);
  }
}
BENCHMARK(BM_PseudoInverseRenewal)->Arg(100)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_PseudoInverseRandom(benchmark::State& state) {
  const auto fx = random_fixture(42, static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::all()).value);
  }
}
BENCHMARK(BM_PseudoInverseRandom)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_SimpleLoopEnumeration(benchmark::State& state) {
  const auto spec = ShiftSpec::full(3);
  const auto trunc = truncate_all(spec);
  const auto len = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_simple_loops(spec, WordCollection::periodic_at(1), trunc, len).loop_count());
  }
}
BENCHMARK(BM_SimpleLoopEnumeration)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SeriesLoopPressure(benchmark::State& state) {
  const auto fx = random_fixture(7, 8, true);
  const auto inv = series_inventory(fx.trunc, 1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loop_pressure(inv, fx.phi, fx.psi).value);
}
BENCHMARK(BM_SeriesLoopPressure)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ReturnCountsZ(benchmark::State& state) {
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(return_counts(z, n).size());
}
BENCHMARK(BM_ReturnCountsZ)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ReturnCountsFreeGroup(benchmark::State& state) {
  const ExtensionShift f2(GroupModel::free_group(2), ExtensionVariant::Plain);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(return_counts(f2, n).size());
}
BENCHMARK(BM_ReturnCountsFreeGroup)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
