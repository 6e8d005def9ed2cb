#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cyberbond/bond.hpp"

namespace cyberbond {

enum class CouponMethod { ProbabilityOfLoss, ParYield };

std::string_view coupon_method_name(CouponMethod method) noexcept;
/// Accepts "pl", "probability_of_loss", "par", "par_yield".
CouponMethod parse_coupon_method(std::string_view name);

/// reference + constant + multiplier * PL * PNL / 100, all in percent.
/// With the defaults this is the simplified cyber form reference + PL.
double coupon_rate_pl(double reference_rate_pct, double pl_pct, double pnl_pct = 100.0,
                      double constant_pct = 0.0, double multiplier = 1.0);

struct ParYield {
  double rate_pct = 0.0;  // per payment period
  double coupon = 0.0;    // USD per payment
};

/// Coupon that prices the trigger-free bond at par.
ParYield par_yield_deterministic(const BondTerms& terms);

struct ParYieldSurface {
  std::vector<double> coupon_triggers;
  std::vector<double> notional_triggers;
  std::vector<double> rate_pct;         // coupon x notional, NaN for excluded pairs
  std::vector<std::size_t> excluded_paths;  // per pair: paths with every coupon dropped
  std::vector<std::size_t> flagged_pairs;   // indices of pairs with no usable path
  std::size_t n_paths = 0;
  double average_pct = 0.0;  // uniform over non-flagged pairs

  double at(std::size_t c, std::size_t n) const {
    return rate_pct[c * notional_triggers.size() + n];
  }
  /// Excluded paths over all paths and pairs.
  double exclusion_fraction() const;
};

/// Par yield with dropped payments' discount factors zeroed, per path, then
/// averaged over paths for each trigger pair and over the grid. Throws
/// NumericalError if every pair is flagged.
ParYieldSurface par_yield_mc(const ScenarioSet& scenarios, const BondTerms& terms,
                             std::span<const double> coupon_triggers,
                             std::span<const double> notional_triggers,
                             Execution exec = Execution::Parallel);
ParYieldSurface par_yield_mc(const BondTerms& terms, const SimulationConfig& config,
                             std::span<const double> coupon_triggers,
                             std::span<const double> notional_triggers,
                             Execution exec = Execution::Parallel);

struct CouponQuote {
  CouponMethod method = CouponMethod::ProbabilityOfLoss;
  double coupon_rate_pct = 0.0;
  double coupon_value = 0.0;  // notional * rate / 100
  std::map<std::string, double> inputs;
};

CouponQuote make_quote(CouponMethod method, double rate_pct, double notional,
                       std::map<std::string, double> inputs);

}  // namespace cyberbond
