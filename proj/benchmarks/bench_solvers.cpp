#include <benchmark/benchmark.h>

#include "nnecon/advertisement.hpp"
#include "nnecon/bargaining.hpp"
#include "nnecon/harness/config.hpp"
#include "nnecon/harness/run.hpp"
#include "nnecon/subscription.hpp"

namespace {

nnecon::SubscriptionMarket subscription(double rho) {
  return nnecon::SubscriptionMarket(nnecon::SubscriptionParams{200.0, 10.0, 0.5, rho, 0.0, 1.0, 10.0, 1.0});
}

nnecon::AdMarket advertisement(double K) {
  nnecon::AdParams p;
  p.K = K;
  p.MB = 1000.0;
  p.dist = nnecon::ValuationDistribution::uniform(10.0);
  p.alpha = 10.0;
  p.beta = 0.5;
  p.p_r = 1.0;
  return nnecon::AdMarket(p);
}

void BM_SolveNe(benchmark::State& state) {
  const auto m = subscription(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(nnecon::solve_ne(m));
}
BENCHMARK(BM_SolveNe);

void BM_SolveNeIterative(benchmark::State& state) {
  const auto m = subscription(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(nnecon::solve_ne_iterative(m));
}
BENCHMARK(BM_SolveNeIterative);

void BM_SolveEquilibriumAd(benchmark::State& state) {
  const auto a = advertisement(10.0);
  for (auto _ : state) benchmark::DoNotOptimize(nnecon::solve_equilibrium_ad(a));
}
BENCHMARK(BM_SolveEquilibriumAd);

void BM_PreBargainAd(benchmark::State& state) {
  const auto a = advertisement(20.0);
  for (auto _ : state) benchmark::DoNotOptimize(nnecon::pre_bargain_ad(a, 0.5));
}
BENCHMARK(BM_PreBargainAd)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto cfg = nnecon::harness::parse_config(
      "model=advertisement\nK=10\nMB=1000\ndist=uniform\nv_max=10\nalpha=10\nbeta=0.5\np_r=1\n"
      "sweep=p_t,-1,4,101\n");
  const nnecon::harness::RunOptions opts{.workers = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(nnecon::harness::run_scenario(cfg, opts));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
