// Serial reference kernels. Kept for testing the OpenMP versions and as the
// baseline in bench/.

#include "cyberbond/kernels.hpp"

namespace cyberbond::kernels::serial {

void payment_losses(const SimulationConfig& config, std::span<const std::int64_t> days,
                    std::span<double> out) {
  const std::size_t m = days.size();
  for (std::size_t p = 0; p < config.n_paths; ++p) {
    path_payment_losses(config, p, days, out.subspan(p * m, m));
  }
}

void path_payoffs(const ScenarioSet& scenarios, const PayoffTable& table, std::span<double> out) {
  for (std::size_t p = 0; p < scenarios.n_paths(); ++p) {
    out[p] = path_payoff(scenarios.row(p), table);
  }
}

void paid_counts(const ScenarioSet& scenarios, std::span<const double> triggers,
                 std::span<std::size_t> counts) {
  const std::size_t m = scenarios.n_days();
  for (std::size_t t = 0; t < triggers.size(); ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t paid = 0;
      for (std::size_t p = 0; p < scenarios.n_paths(); ++p) {
        if (scenarios.at(p, j) < triggers[t]) ++paid;
      }
      counts[t * m + j] = paid;
    }
  }
}

void par_yield_cells(const ScenarioSet& scenarios, const DiscountTable& discounts,
                     std::span<const double> coupon_triggers,
                     std::span<const double> notional_triggers, std::span<ParYieldCell> cells) {
  const std::size_t k = notional_triggers.size();
  for (std::size_t c = 0; c < coupon_triggers.size(); ++c) {
    for (std::size_t n = 0; n < k; ++n) {
      ParYieldCell cell;
      for (std::size_t p = 0; p < scenarios.n_paths(); ++p) {
        const double py =
            path_par_yield(scenarios.row(p), discounts, coupon_triggers[c], notional_triggers[n]);
        if (py >= 0.0) {
          cell.sum += py;
          ++cell.included;
        }
      }
      cells[c * k + n] = cell;
    }
  }
}

}  // namespace cyberbond::kernels::serial
