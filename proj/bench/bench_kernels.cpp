#include <benchmark/benchmark.h>

#include "pkem/analysis.hpp"
#include "pkem/source.hpp"

using namespace pkem;
using namespace pkem::analysis;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) == 0 ? "serial" : "parallel"); }

void BM_MaxCollision(benchmark::State& st) {
  const auto h = cca_int_hash(uhash::CcaHash(6, 3, 6), 6, 6);
  for (auto _ : st) benchmark::DoNotOptimize(max_collision(6, 12, h, exec_of(st)));
  label(st);
}
BENCHMARK(BM_MaxCollision)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolutionMaxima(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(solution_maxima(4, 2, 4, exec_of(st)));
  label(st);
}
BENCHMARK(BM_SolutionMaxima)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ExactDistance(benchmark::State& st) {
  IkemParams p(Mode::cca, SourceSpec::bsc(0.25, 0.25, 4));
  p.t = 2;
  p.ell = 1;
  p.nu = 5;
  const Ikem ikem(p);
  for (auto _ : st) benchmark::DoNotOptimize(exact_distance(ikem, 0, exec_of(st)));
  label(st);
}
BENCHMARK(BM_ExactDistance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TwiseIndependence(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(twise_independence(4, 3, exec_of(st)));
  label(st);
}
BENCHMARK(BM_TwiseIndependence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
