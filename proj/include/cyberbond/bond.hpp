#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "cyberbond/fitting.hpp"
#include "cyberbond/lossmodel.hpp"

namespace cyberbond {

inline constexpr double kNoTrigger = std::numeric_limits<double>::infinity();

/// Payment days floor(365 * i / payments_per_year) for i = 1..years*ppy.
/// Three years semiannual gives {182, 365, 547, 730, 912, 1095}.
std::vector<std::int64_t> periodic_schedule(int years, int payments_per_year);

struct BondTerms {
  double notional = 0.0;
  std::int64_t maturity_days = 0;
  std::vector<std::int64_t> coupon_days;  // strictly increasing, last == maturity_days
  double coupon = 0.0;                    // USD per payment
  double funding_rate = 0.0;              // continuously compounded, ACT/365
  double coupon_trigger = kNoTrigger;
  double notional_trigger = kNoTrigger;

  /// Throws InvalidArgument on a bad schedule, negative amounts, or
  /// coupon_trigger > notional_trigger.
  void validate() const;
  /// Schedule and amounts only; trigger sweeps use this so that any
  /// (coupon, notional) trigger pair can be evaluated.
  void validate_cashflows() const;

  BondTerms with_triggers(double coupon_trigger, double notional_trigger) const;
};

double discount_factor(double rate, std::int64_t day);

/// Sum of C * e^{-R d_i / 365} plus N * e^{-R d / 365}; triggers ignored.
double deterministic_price(const BondTerms& terms);

/// d(deterministic_price)/dR in closed form.
double deterministic_rate_sensitivity(const BondTerms& terms);

struct PaymentFlags {
  std::vector<bool> coupons;
  bool notional = false;
};

/// Coupon i is paid iff cumulative loss at d_i < coupon_trigger; the
/// notional iff cumulative loss at maturity < notional_trigger.
PaymentFlags evaluate_triggers(const LossPath& path, const BondTerms& terms);

struct PricingResult {
  double price = 0.0;
  double mc_std_error = 0.0;
  std::size_t n_paths = 0;
};

/// Scenarios observed on the bond's coupon days.
ScenarioSet simulate_bond_scenarios(const BondTerms& terms, const SimulationConfig& config,
                                    Execution exec = Execution::Parallel);

/// Mean discounted payoff over paths. Triggers are taken from `terms`
/// without the coupon <= notional ordering check, so trigger sweeps can use
/// any pair.
PricingResult mc_price(const ScenarioSet& scenarios, const BondTerms& terms,
                       Execution exec = Execution::Parallel);
PricingResult mc_price(const BondTerms& terms, const SimulationConfig& config,
                       Execution exec = Execution::Parallel);

/// Trigger levels spaced uniformly in dollars between two empirical
/// quantiles of `losses`.
std::vector<double> quantile_trigger_grid(std::span<const double> losses, double p_low,
                                          double p_high, std::size_t points);

struct SurvivalCurve {
  std::vector<double> triggers;
  std::vector<std::int64_t> payment_days;
  std::vector<double> probability;  // row-major: trigger x payment

  double at(std::size_t trigger, std::size_t payment) const {
    return probability[trigger * payment_days.size() + payment];
  }
  /// Throws NumericalError if a monotonicity invariant is broken.
  void check_invariants() const;
};

SurvivalCurve coupon_survival_curve(const ScenarioSet& scenarios, std::span<const double> triggers,
                                    Execution exec = Execution::Parallel);
SurvivalCurve coupon_survival_curve(const BondTerms& terms, const SimulationConfig& config,
                                    std::span<const double> triggers);

/// Notional repayment probability per trigger (single payment at maturity).
SurvivalCurve notional_survival_curve(const ScenarioSet& scenarios,
                                      std::span<const double> triggers,
                                      Execution exec = Execution::Parallel);
SurvivalCurve notional_survival_curve(const BondTerms& terms, const SimulationConfig& config,
                                      std::span<const double> triggers);

/// 1 - notional payment probability, per trigger.
std::vector<double> probability_of_loss(const ScenarioSet& scenarios,
                                        std::span<const double> triggers,
                                        Execution exec = Execution::Parallel);
std::vector<double> probability_of_loss(const BondTerms& terms, const SimulationConfig& config,
                                        std::span<const double> triggers);

struct YieldSpread {
  double yield_pct = 0.0;
  double spread_pct = 0.0;
};

/// Y = C / P * 100 and spread = Y - 100 R. Throws InvalidArgument for P <= 0.
YieldSpread yield_and_spread(double price, double coupon, double funding_rate);

struct Greeks {
  double dS_dlambda = 0.0;  // frequency parameter 0
  double dS_dmu = 0.0;      // severity parameter 0
  double dS_dsigma = 0.0;   // severity parameter 1
  double dS_dr = 0.0;
};

struct GreekBumps {
  double lambda = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double rate = 0.0;

  /// 1% of each parameter with an absolute floor of 1e-4.
  static GreekBumps defaults(const BondTerms& terms, const SimulationConfig& config);
  void validate() const;
};

/// Central differences of mc_price under common random numbers (the master
/// seed and path indices are shared by every bumped run). The severity must
/// have at least two parameters.
Greeks greeks(const BondTerms& terms, const SimulationConfig& config, const GreekBumps& bumps,
              Execution exec = Execution::Parallel);

enum class PrudentMode { Max, Min };

std::string_view prudent_mode_name(PrudentMode mode) noexcept;
PrudentMode parse_prudent_mode(std::string_view name);

struct PrudentResult {
  double price = 0.0;
  std::vector<double> parameters;  // frequency params then severity params
  std::size_t evaluations = 0;
  std::vector<double> corner_prices;  // 2^d corners, bit i set = upper bound of dim i
  double center_price = 0.0;
};

/// Replaces frequency then severity parameters with `params`.
SimulationConfig with_model_parameters(const SimulationConfig& config,
                                       std::span<const double> params);

/// Optimizes mc_price over the box (dimensions = frequency params followed
/// by severity params): corners and center first, then a coordinate search
/// from the best of those.
PrudentResult prudent_price(const BondTerms& terms, const SimulationConfig& config,
                            const ConfidenceBox& box, PrudentMode mode = PrudentMode::Max,
                            Execution exec = Execution::Parallel);

}  // namespace cyberbond
