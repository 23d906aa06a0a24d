#include <benchmark/benchmark.h>

#include <cmath>

#include "wavinv/bayes/forward_map.hpp"
#include "wavinv/benchmarks/run.hpp"
#include "wavinv/darcy/multilevel.hpp"

using namespace wavinv;

namespace {

darcy::DarcyProblem linear_problem(int J) {
  const std::size_t n = (std::size_t{1} << J) + 1;
  darcy::DarcyProblem p;
  p.log_permeability.values = Array2D<double>(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) p.log_permeability(r, c) = 2.0 * ((c + r) / double(n - 1) - 1.0);
  p.sources = darcy::corner_sources();
  return p;
}

// range(0) = J, range(1) = -log10(epsilon)
void BM_VcycleSolve(benchmark::State& st) {
  const auto p = linear_problem(int(st.range(0)));
  darcy::SolverSettings s;
  s.finest_level_J = int(st.range(0));
  s.refinement_threshold = std::pow(10.0, -double(st.range(1)));
  darcy::SolveReport rep;
  for (auto _ : st) benchmark::DoNotOptimize(darcy::vcycle_solve(p, s, &rep));
  st.counters["vcycles"] = rep.vcycles;
  st.counters["active"] = double(rep.active_nodes);
}
BENCHMARK(BM_VcycleSolve)->Args({5, 2})->Args({5, 8})->Args({6, 2})->Args({6, 8})->Unit(benchmark::kMillisecond);

void BM_DirectSolve(benchmark::State& st) {
  const auto p = linear_problem(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(darcy::direct_solve_oracle(p, int(st.range(0))));
}
BENCHMARK(BM_DirectSolve)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

// One likelihood evaluation's forward map at the inference settings.
void BM_ForwardMap(benchmark::State& st) {
  bayes::DarcyForwardMap fm(benchmarks::inference_solver_defaults(), 10);
  auto tree = wavelet::make_parameter_tree(bayes::kParameterLevels);
  tree.scaling(0, 0) = -1.0;
  tree.scaling(1, 1) = 1.0;
  for (auto _ : st) benchmark::DoNotOptimize(fm(tree));
}
BENCHMARK(BM_ForwardMap)->Unit(benchmark::kMillisecond);

}  // namespace
