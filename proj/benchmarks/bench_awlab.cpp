#include <benchmark/benchmark.h>

#include "awlab/bounds.hpp"
#include "awlab/green.hpp"
#include "awlab/isoperimetry.hpp"
#include "awlab/level_profile.hpp"
#include "awlab/random_env.hpp"
#include "awlab/walker.hpp"

namespace {

using namespace awlab;

// Killed Green field on the full Z^d box of side 2n+1.
void BM_GreenSolve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const WeightedGraph g = lattice_graph(d, static_cast<int>(state.range(1)));
  const Region a = Region::interior(g);
  for (auto _ : state) benchmark::DoNotOptimize(green_killed(g, a).at_root());
  state.counters["vertices"] = static_cast<double>(a.size());
}
BENCHMARK(BM_GreenSolve)->Args({2, 10})->Args({2, 30})->Args({3, 6})->Args({3, 12})->Unit(benchmark::kMillisecond);

void BM_GreenEnvironment(benchmark::State& state) {
  const Environment env =
      sample_environment(EnvironmentLaw::uniform01(), LatticeBox{2, static_cast<int>(state.range(0))}, 7, 1);
  const WeightedGraph g = environment_graph(env);
  const Region a = Region::interior(g);
  for (auto _ : state) benchmark::DoNotOptimize(green_killed(g, a).at_root());
}
BENCHMARK(BM_GreenEnvironment)->Arg(12)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_Profile(benchmark::State& state) {
  const WeightedGraph g = lattice_graph(2, static_cast<int>(state.range(0)));
  const GreenField gf = green_killed(g, Region::interior(g));
  for (auto _ : state) {
    const LevelProfile lp = profile_u(g, gf);
    benchmark::DoNotOptimize(integral_u(lp).integral);
  }
}
BENCHMARK(BM_Profile)->Arg(10)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_BoundCurve(benchmark::State& state) {
  const ProfileFunction f = state.range(0) == 0 ? ProfileFunction::power(3.0, 1.0)
                                                : ProfileFunction::custom({{1.0, 1.0}, {4.0, 2.0}, {9.0, 3.0}}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(bound_exit(solve_bound_curve(f, 0.5, 1000.0)));
  state.SetLabel(state.range(0) == 0 ? "closed form" : "numeric");
}
BENCHMARK(BM_BoundCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_IsoExhaustive(benchmark::State& state) {
  const WeightedGraph g = lattice_graph(2, 7);
  const ProfileFunction f = ProfileFunction::power(2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cis_exhaustive(g, f, static_cast<std::size_t>(state.range(0)), 10'000'000, 1).constant);
}
BENCHMARK(BM_IsoExhaustive)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_IsoSampled(benchmark::State& state) {
  const WeightedGraph g = lattice_graph(2, 15);
  const ProfileFunction f = ProfileFunction::power(2.0);
  SamplingOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  opts.max_measure = 400.0;
  opts.seed = 1;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cis_sampled(g, f, opts).constant);
}
BENCHMARK(BM_IsoSampled)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SimulateExit(benchmark::State& state) {
  const WeightedGraph g = lattice_graph(2, static_cast<int>(state.range(0)));
  const Region a = Region::interior(g);
  WalkOptions opts;
  opts.trials = 1000;
  opts.seed = 3;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_exit(g, a, opts).mean);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * opts.trials));
}
BENCHMARK(BM_SimulateExit)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_TreeDisplacement(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(simulate_tree_displacement(3, 1000, 1000, 5, 1).front());
}
BENCHMARK(BM_TreeDisplacement)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
