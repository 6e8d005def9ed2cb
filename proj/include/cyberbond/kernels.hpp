#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version; both write per-path or per-cell results into disjoint slots and
// reduce in index order, so results match bitwise whatever the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cyberbond/lossmodel.hpp"

namespace cyberbond::kernels {

/// Discounted cash flows and triggers of one bond, flattened for the kernels.
struct PayoffTable {
  std::vector<double> coupon_pv;  // C * df_i per observation column
  double notional_pv = 0.0;       // N * df at maturity (last column)
  double coupon_trigger = 0.0;
  double notional_trigger = 0.0;
};

/// Par-yield inputs: discount factors per column and at maturity.
struct DiscountTable {
  std::vector<double> coupon_df;
  double maturity_df = 0.0;
};

struct ParYieldCell {
  double sum = 0.0;            // sum over included paths of the path par yield (fraction)
  std::size_t included = 0;    // paths with a non-zero denominator
};

namespace serial {

/// Fills `out` (n_paths x days.size(), row-major) with cumulative losses.
void payment_losses(const SimulationConfig& config, std::span<const std::int64_t> days,
                    std::span<double> out);

/// Present value actually received on each path.
void path_payoffs(const ScenarioSet& scenarios, const PayoffTable& table, std::span<double> out);

/// counts[t * n_days + j] = #paths with loss at column j strictly below triggers[t].
void paid_counts(const ScenarioSet& scenarios, std::span<const double> triggers,
                 std::span<std::size_t> counts);

/// cells[c * notional_triggers.size() + k] for every trigger pair.
void par_yield_cells(const ScenarioSet& scenarios, const DiscountTable& discounts,
                     std::span<const double> coupon_triggers,
                     std::span<const double> notional_triggers, std::span<ParYieldCell> cells);

}  // namespace serial

namespace omp {

void payment_losses(const SimulationConfig& config, std::span<const std::int64_t> days,
                    std::span<double> out);
void path_payoffs(const ScenarioSet& scenarios, const PayoffTable& table, std::span<double> out);
void paid_counts(const ScenarioSet& scenarios, std::span<const double> triggers,
                 std::span<std::size_t> counts);
void par_yield_cells(const ScenarioSet& scenarios, const DiscountTable& discounts,
                     std::span<const double> coupon_triggers,
                     std::span<const double> notional_triggers, std::span<ParYieldCell> cells);

/// Thread count used by the OpenMP kernels (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace omp

// Per-path building blocks shared by both variants.
void path_payment_losses(const SimulationConfig& config, std::size_t path_index,
                         std::span<const std::int64_t> days, std::span<double> out);
double path_payoff(std::span<const double> losses, const PayoffTable& table);
/// Par yield of one path as a fraction, or a negative value when every coupon
/// was dropped (zero denominator).
double path_par_yield(std::span<const double> losses, const DiscountTable& discounts,
                      double coupon_trigger, double notional_trigger);

}  // namespace cyberbond::kernels
