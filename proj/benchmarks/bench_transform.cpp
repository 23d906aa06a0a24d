#include <benchmark/benchmark.h>

#include <random>

#include "wavinv/wavelet/quadtree.hpp"

using namespace wavinv;

namespace {

GridField2D random_periodic(std::size_t n) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> nd;
  GridField2D f;
  f.values = Array2D<double>(n, n);
  for (double& v : f.values.storage()) v = nd(g);
  f.domain = {0, 2, 0, 2};
  f.sampling = Sampling::periodic;
  return f;
}

void BM_Forward2D(benchmark::State& st) {
  const auto f = random_periodic(std::size_t(st.range(0)));
  wavelet::LiftingConfig cfg;
  cfg.half_width = int(st.range(1));
  const int levels = log2_exact(f.rows()) - 1;
  for (auto _ : st) benchmark::DoNotOptimize(wavelet::forward_transform_2d(f, levels, cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}
BENCHMARK(BM_Forward2D)->Args({64, 1})->Args({64, 2})->Args({64, 3})->Args({256, 2});

void BM_Inverse2D(benchmark::State& st) {
  const auto f = random_periodic(std::size_t(st.range(0)));
  wavelet::LiftingConfig cfg;
  const auto tree = wavelet::forward_transform_2d(f, log2_exact(f.rows()) - 1, cfg);
  for (auto _ : st) benchmark::DoNotOptimize(wavelet::inverse_transform_2d(tree, cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}
BENCHMARK(BM_Inverse2D)->Arg(64)->Arg(256);

}  // namespace
