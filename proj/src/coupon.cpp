#include "cyberbond/coupon.hpp"

#include <cmath>
#include <limits>

#include "cyberbond/errors.hpp"
#include "cyberbond/kernels.hpp"

namespace cyberbond {

std::string_view coupon_method_name(CouponMethod method) noexcept {
  return method == CouponMethod::ParYield ? "par_yield" : "probability_of_loss";
}

CouponMethod parse_coupon_method(std::string_view name) {
  if (name == "pl" || name == "probability_of_loss") return CouponMethod::ProbabilityOfLoss;
  if (name == "par" || name == "par_yield") return CouponMethod::ParYield;
  throw InvalidArgument("unknown coupon method '" + std::string(name) + "'");
}

double coupon_rate_pl(double reference_rate_pct, double pl_pct, double pnl_pct,
                      double constant_pct, double multiplier) {
  for (const double v : {reference_rate_pct, pl_pct, pnl_pct, constant_pct, multiplier}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("coupon inputs must be finite and non-negative");
    }
  }
  if (pnl_pct > 100.0) throw InvalidArgument("percentage of notional lost exceeds 100");
  return reference_rate_pct + constant_pct + multiplier * (pl_pct * pnl_pct / 100.0);
}

ParYield par_yield_deterministic(const BondTerms& terms) {
  terms.validate_cashflows();
  double annuity = 0.0;
  for (const auto d : terms.coupon_days) annuity += discount_factor(terms.funding_rate, d);
  const double fraction = (1.0 - discount_factor(terms.funding_rate, terms.maturity_days)) / annuity;
  return {fraction * 100.0, terms.notional * fraction};
}

double ParYieldSurface::exclusion_fraction() const {
  if (excluded_paths.empty() || n_paths == 0) return 0.0;
  std::size_t total = 0;
  for (const auto e : excluded_paths) total += e;
  return static_cast<double>(total) /
         (static_cast<double>(n_paths) * static_cast<double>(excluded_paths.size()));
}

ParYieldSurface par_yield_mc(const ScenarioSet& scenarios, const BondTerms& terms,
                             std::span<const double> coupon_triggers,
                             std::span<const double> notional_triggers, Execution exec) {
  terms.validate_cashflows();
  if (coupon_triggers.empty() || notional_triggers.empty()) {
    throw InvalidArgument("par-yield trigger grids must not be empty");
  }
  if (scenarios.days() != terms.coupon_days) {
    throw InvalidArgument("scenario observation days differ from the bond's coupon days");
  }
  kernels::DiscountTable discounts;
  for (const auto d : terms.coupon_days) {
    discounts.coupon_df.push_back(discount_factor(terms.funding_rate, d));
  }
  discounts.maturity_df = discount_factor(terms.funding_rate, terms.maturity_days);

  std::vector<kernels::ParYieldCell> cells(coupon_triggers.size() * notional_triggers.size());
  if (exec == Execution::Parallel) {
    kernels::omp::par_yield_cells(scenarios, discounts, coupon_triggers, notional_triggers, cells);
  } else {
    kernels::serial::par_yield_cells(scenarios, discounts, coupon_triggers, notional_triggers,
                                     cells);
  }

  ParYieldSurface surface;
  surface.coupon_triggers.assign(coupon_triggers.begin(), coupon_triggers.end());
  surface.notional_triggers.assign(notional_triggers.begin(), notional_triggers.end());
  surface.n_paths = scenarios.n_paths();
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    surface.excluded_paths.push_back(scenarios.n_paths() - cells[i].included);
    if (cells[i].included == 0) {
      surface.rate_pct.push_back(std::numeric_limits<double>::quiet_NaN());
      surface.flagged_pairs.push_back(i);
      continue;
    }
    const double pct = cells[i].sum / static_cast<double>(cells[i].included) * 100.0;
    surface.rate_pct.push_back(pct);
    sum += pct;
    ++used;
  }
  if (used == 0) throw NumericalError("every trigger pair drops all coupons on every path");
  surface.average_pct = sum / static_cast<double>(used);
  return surface;
}

ParYieldSurface par_yield_mc(const BondTerms& terms, const SimulationConfig& config,
                             std::span<const double> coupon_triggers,
                             std::span<const double> notional_triggers, Execution exec) {
  return par_yield_mc(simulate_bond_scenarios(terms, config, exec), terms, coupon_triggers,
                      notional_triggers, exec);
}

CouponQuote make_quote(CouponMethod method, double rate_pct, double notional,
                       std::map<std::string, double> inputs) {
  return {method, rate_pct, notional * rate_pct / 100.0, std::move(inputs)};
}

}  // namespace cyberbond
