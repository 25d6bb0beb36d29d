#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "tlstat/lstat.hpp"
#include "tlstat/montecarlo.hpp"
#include "tlstat/variance.hpp"

using namespace tlstat;

namespace {

const Distribution& family(int i) {
  static const std::vector<Distribution> all{Distribution::uniform(), Distribution::normal(),
                                             Distribution::cauchy(), Distribution::pareto(3.0)};
  return all[static_cast<std::size_t>(i)];
}

void BM_Quantile(benchmark::State& state) {
  const auto& dist = family(static_cast<int>(state.range(0)));
  double u = 0.001, acc = 0.0;
  for (auto _ : state) {
    acc += dist.quantile(u);
    u = u > 0.998 ? 0.001 : u + 0.000731;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Quantile)->DenseRange(0, 3);

void BM_TrimmedLstat(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TrimSpec trim(n, n / 4, n / 4, 0.25, 0.25);
  const auto weight = WeightSpec::polynomial({0.0, 1.0});
  const auto coeffs = reference_coefficients(weight, trim);
  Stream s(1, n, 0);
  auto x = Distribution::normal().sample(n, s);
  std::sort(x.begin(), x.end());
  for (auto _ : state) benchmark::DoNotOptimize(trimmed_lstat(x, coeffs, trim));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TrimmedLstat)->RangeMultiplier(4)->Range(500, 32000);

void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TrimSpec trim(n, n / 4, n / 4, 0.25, 0.25);
  const auto weight = WeightSpec::polynomial({0.0, 1.0});
  const auto dist = Distribution::normal();
  Stream cs(1, n, std::uint64_t{1} << 63);
  const auto scheme = make_scheme(weight, trim, {Perturbation::Kind::kSaturating, 1.0, 1.0}, cs);
  const Decomposer decomposer(weight, scheme, trim, dist);
  Stream s(1, n, 0);
  auto x = dist.sample(n, s);
  std::sort(x.begin(), x.end());
  for (auto _ : state) benchmark::DoNotOptimize(decomposer(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(4)->Range(500, 32000);

void BM_AsymptoticVariance(benchmark::State& state) {
  const auto& dist = family(static_cast<int>(state.range(0)));
  const auto weight = WeightSpec::polynomial({0.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(asymptotic_variance(weight, dist, 0.2, 0.2).sigma2);
}
BENCHMARK(BM_AsymptoticVariance)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_RunTails(benchmark::State& state) {
  ExperimentConfig c;
  c.distribution = Distribution::uniform();
  c.weight = WeightSpec::constant(1.0);
  c.n = static_cast<std::size_t>(state.range(0));
  c.alpha = c.beta = 0.25;
  c.replications = 2000;
  c.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_tails(c, {.workers = 1}).kolmogorov);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.replications));
}
BENCHMARK(BM_RunTails)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
