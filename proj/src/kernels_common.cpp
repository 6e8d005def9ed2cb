#include "cyberbond/kernels.hpp"
#include "path_generator.hpp"

namespace cyberbond::kernels {

void path_payment_losses(const SimulationConfig& config, std::size_t path_index,
                         std::span<const std::int64_t> days, std::span<double> out) {
  std::size_t next_column = 0;
  double running = 0.0;
  detail::for_each_event(config, path_index, [&](double day, double amount) {
    while (next_column < days.size() && static_cast<double>(days[next_column]) < day) {
      out[next_column++] = running;
    }
    running += amount;
  });
  while (next_column < days.size()) out[next_column++] = running;
}

double path_payoff(std::span<const double> losses, const PayoffTable& table) {
  double value = 0.0;
  for (std::size_t j = 0; j < losses.size(); ++j) {
    if (losses[j] < table.coupon_trigger) value += table.coupon_pv[j];
  }
  if (!losses.empty() && losses.back() < table.notional_trigger) value += table.notional_pv;
  return value;
}

double path_par_yield(std::span<const double> losses, const DiscountTable& discounts,
                      double coupon_trigger, double notional_trigger) {
  double denominator = 0.0;
  for (std::size_t j = 0; j < losses.size(); ++j) {
    if (losses[j] < coupon_trigger) denominator += discounts.coupon_df[j];
  }
  if (denominator == 0.0) return -1.0;
  const bool notional_paid = !losses.empty() && losses.back() < notional_trigger;
  const double numerator = 1.0 - (notional_paid ? discounts.maturity_df : 0.0);
  return numerator / denominator;
}

}  // namespace cyberbond::kernels
