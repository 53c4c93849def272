// Kernels behind the solver and the norm commands, on the default instance.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "vexp/choquard.hpp"
#include "vexp/grid.hpp"
#include "vexp/nakano.hpp"
#include "vexp/sobolev.hpp"
#include "vexp_cli/config.hpp"

namespace {

vexp::GridFunction bump(const vexp::Grid1D& g) {
  return vexp::GridFunction::sample(
      g, [](double x) { return std::cos(0.5 * M_PI * x) * (1.0 + 0.3 * x); }, true);
}

const vexp::ExponentBundle& bundle() {
  static const auto b = vexp::cli::build_bundle(vexp::cli::default_instance());
  return b;
}

void BM_PairTable(benchmark::State& state) {
  const vexp::Grid1D g(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    vexp::PairTable t(g, bundle());
    benchmark::DoNotOptimize(t);
  }
}

void BM_Energy(benchmark::State& state) {
  const vexp::Grid1D g(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const vexp::ChoquardEnergy E(g, bundle());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(E.energy(u.values()));
}

void BM_Gradient(benchmark::State& state) {
  const vexp::Grid1D g(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const vexp::ChoquardEnergy E(g, bundle());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(E.gradient(u.values()));
}

void BM_Luxemburg(benchmark::State& state) {
  const vexp::Grid1D g(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const auto u = bump(g);
  const vexp::ScalarExponentField q = bundle().p.diagonal();
  for (auto _ : state) benchmark::DoNotOptimize(vexp::luxemburg_norm(u, q));
}

void BM_SobolevNorm(benchmark::State& state) {
  const vexp::Grid1D g(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  const vexp::PairTable t(g, bundle());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(vexp::sobolev_norm(u, t));
}

}  // namespace

BENCHMARK(BM_PairTable)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Energy)->Arg(101)->Arg(401)->Arg(1601)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Gradient)->Arg(101)->Arg(401)->Arg(1601)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Luxemburg)->Arg(401)->Arg(1601)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SobolevNorm)->Arg(101)->Arg(401)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
