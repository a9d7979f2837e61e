#include <benchmark/benchmark.h>

#include <cmath>

#include "cavity/fermi_entropy.hpp"
#include "cavity/fermi_sampler.hpp"
#include "cavity/graph.hpp"
#include "cavity/hamiltonian.hpp"
#include "cavity/rng.hpp"

using namespace cavity;

namespace {

FieldTable fields_for(std::uint32_t n, std::uint32_t k) {
  const Graph g = generate_graph(n, 0.5, 1);
  CounterRng rng(2);
  return cavity_fields(g, Configuration(random_subset(rng, n, k)), 0.5 * k);
}

void BM_LogZSigma(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto table = fields_for(n, 16);
  for (auto _ : state) benchmark::DoNotOptimize(log_z_sigma(table, 1.0));
}
BENCHMARK(BM_LogZSigma)->Arg(256)->Arg(1024)->Arg(4096);

void BM_LogZSigmaSitewise(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto table = fields_for(n, 16);
  for (auto _ : state) benchmark::DoNotOptimize(log_z_sigma_sitewise(table, 1.0));
}
BENCHMARK(BM_LogZSigmaSitewise)->Arg(256)->Arg(1024)->Arg(4096);

void BM_SampleStep(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto table = fields_for(n, 16);
  CounterRng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_step(table, 1.0, rng));
}
BENCHMARK(BM_SampleStep)->Arg(256)->Arg(1024)->Arg(4096);

void BM_CavityFields(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const Graph g = generate_graph(n, 0.5, 1);
  CounterRng rng(2);
  const Configuration sigma(random_subset(rng, n, 16));
  for (auto _ : state) benchmark::DoNotOptimize(cavity_fields(g, sigma, 8.0));
}
BENCHMARK(BM_CavityFields)->Arg(256)->Arg(1024)->Arg(4096);

void BM_MaxClique(benchmark::State& state) {
  const Graph g = generate_graph(static_cast<std::uint32_t>(state.range(0)), 0.5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(max_clique(g));
}
BENCHMARK(BM_MaxClique)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OccupationSolve(benchmark::State& state) {
  const auto levels = static_cast<std::size_t>(state.range(0));
  LevelSpectrum s;
  for (std::size_t j = 0; j < levels; ++j) s.g.push_back(1000.0 * std::exp(-0.05 * j) + 1.0);
  const double N = 0.4 * s.total();
  const auto [lo, hi] = energy_range(s, N);
  const double E = lo + 0.3 * (hi - lo);
  for (auto _ : state) benchmark::DoNotOptimize(occupation_solve(s, N, E));
}
BENCHMARK(BM_OccupationSolve)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
