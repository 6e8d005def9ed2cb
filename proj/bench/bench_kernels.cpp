// Serial reference vs OpenMP kernels on a three-year semiannual bond.
#include <benchmark/benchmark.h>

#include <vector>

#include "cyberbond/bond.hpp"
#include "cyberbond/kernels.hpp"

using namespace cyberbond;

namespace {

SimulationConfig model(std::size_t paths) {
  return SimulationConfig{1095, paths, 2019, DistributionSpec::exponential(0.0211),
                          DistributionSpec::lognormal(14.9179, 2.3434)};
}

const std::vector<std::int64_t>& days() {
  static const auto d = periodic_schedule(3, 2);
  return d;
}

void set_threads(const benchmark::State& state) {
  if (state.range(1) > 0) kernels::omp::set_threads(static_cast<int>(state.range(1)));
}

void BM_PaymentLossesSerial(benchmark::State& state) {
  const auto config = model(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(config.n_paths * days().size());
  for (auto _ : state) {
    kernels::serial::payment_losses(config, days(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PaymentLossesOmp(benchmark::State& state) {
  set_threads(state);
  const auto config = model(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(config.n_paths * days().size());
  for (auto _ : state) {
    kernels::omp::payment_losses(config, days(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ParYieldCells(benchmark::State& state) {
  set_threads(state);
  const auto config = model(static_cast<std::size_t>(state.range(0)));
  const auto scenarios = simulate_scenarios(config, days());
  const auto finals = scenarios.final_losses();
  const auto coupons = quantile_trigger_grid(finals, 0.10, 0.90, 20);
  const auto notionals = quantile_trigger_grid(finals, 0.10, 0.99, 20);
  kernels::DiscountTable discounts;
  for (const auto d : days()) discounts.coupon_df.push_back(discount_factor(0.0152, d));
  discounts.maturity_df = discount_factor(0.0152, days().back());
  std::vector<kernels::ParYieldCell> cells(coupons.size() * notionals.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::par_yield_cells(scenarios, discounts, coupons, notionals, cells);
    } else {
      kernels::serial::par_yield_cells(scenarios, discounts, coupons, notionals, cells);
    }
    benchmark::DoNotOptimize(cells.data());
  }
}

}  // namespace

BENCHMARK(BM_PaymentLossesSerial)->Args({5000, 0})->Args({50000, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PaymentLossesOmp)
    ->ArgsProduct({{5000, 50000}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParYieldCells<false>)->Args({5000, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParYieldCells<true>)->ArgsProduct({{5000}, {1, 2, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
