#include "cyberbond/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cyberbond::kernels::omp {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void payment_losses(const SimulationConfig& config, std::span<const std::int64_t> days,
                    std::span<double> out) {
  const std::size_t m = days.size();
  const auto n = static_cast<std::int64_t>(config.n_paths);
  // Path cost varies with the event count, hence dynamic scheduling. An
  // exception cannot cross the parallel region, so capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(i);
    try {
      path_payment_losses(config, p, days, out.subspan(p * m, m));
    } catch (...) {
#pragma omp critical(cyberbond_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void path_payoffs(const ScenarioSet& scenarios, const PayoffTable& table, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(scenarios.n_paths());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(i);
    out[p] = path_payoff(scenarios.row(p), table);
  }
}

void paid_counts(const ScenarioSet& scenarios, std::span<const double> triggers,
                 std::span<std::size_t> counts) {
  const std::size_t m = scenarios.n_days();
  const auto cells = static_cast<std::int64_t>(triggers.size() * m);
#pragma omp parallel for schedule(static)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const auto t = static_cast<std::size_t>(cell) / m;
    const auto j = static_cast<std::size_t>(cell) % m;
    std::size_t paid = 0;
    for (std::size_t p = 0; p < scenarios.n_paths(); ++p) {
      if (scenarios.at(p, j) < triggers[t]) ++paid;
    }
    counts[static_cast<std::size_t>(cell)] = paid;
  }
}

void par_yield_cells(const ScenarioSet& scenarios, const DiscountTable& discounts,
                     std::span<const double> coupon_triggers,
                     std::span<const double> notional_triggers, std::span<ParYieldCell> cells) {
  const std::size_t k = notional_triggers.size();
  const auto total = static_cast<std::int64_t>(coupon_triggers.size() * k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto c = static_cast<std::size_t>(idx) / k;
    const auto nt = static_cast<std::size_t>(idx) % k;
    ParYieldCell cell;
    for (std::size_t p = 0; p < scenarios.n_paths(); ++p) {
      const double py =
          path_par_yield(scenarios.row(p), discounts, coupon_triggers[c], notional_triggers[nt]);
      if (py >= 0.0) {
        cell.sum += py;
        ++cell.included;
      }
    }
    cells[static_cast<std::size_t>(idx)] = cell;
  }
}

}  // namespace cyberbond::kernels::omp
