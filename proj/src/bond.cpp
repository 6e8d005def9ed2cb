#include "cyberbond/bond.hpp"

#include <algorithm>
#include <cmath>

#include "cyberbond/errors.hpp"
#include "cyberbond/kernels.hpp"

namespace cyberbond {
namespace {

kernels::PayoffTable payoff_table(const BondTerms& terms) {
  kernels::PayoffTable table;
  table.coupon_pv.reserve(terms.coupon_days.size());
  for (const auto d : terms.coupon_days) {
    table.coupon_pv.push_back(terms.coupon * discount_factor(terms.funding_rate, d));
  }
  table.notional_pv = terms.notional * discount_factor(terms.funding_rate, terms.maturity_days);
  table.coupon_trigger = terms.coupon_trigger;
  table.notional_trigger = terms.notional_trigger;
  return table;
}

void require_schedule_match(const ScenarioSet& scenarios, const BondTerms& terms) {
  if (scenarios.days() != terms.coupon_days) {
    throw InvalidArgument("scenario observation days differ from the bond's coupon days");
  }
}

std::vector<std::size_t> counts_for(const ScenarioSet& scenarios, std::span<const double> triggers,
                                    Execution exec) {
  if (triggers.empty()) throw InvalidArgument("trigger grid must not be empty");
  std::vector<std::size_t> counts(triggers.size() * scenarios.n_days());
  if (exec == Execution::Parallel) {
    kernels::omp::paid_counts(scenarios, triggers, counts);
  } else {
    kernels::serial::paid_counts(scenarios, triggers, counts);
  }
  return counts;
}

}  // namespace

std::vector<std::int64_t> periodic_schedule(int years, int payments_per_year) {
  if (years < 1 || payments_per_year < 1) {
    throw InvalidArgument("schedule needs positive years and payments per year");
  }
  std::vector<std::int64_t> days;
  const int total = years * payments_per_year;
  for (int i = 1; i <= total; ++i) {
    days.push_back(static_cast<std::int64_t>(365 * i / payments_per_year));
  }
  return days;
}

void BondTerms::validate_cashflows() const {
  if (!(notional > 0.0) || !std::isfinite(notional)) {
    throw InvalidArgument("notional must be positive");
  }
  if (maturity_days < 1) throw InvalidArgument("maturity_days must be positive");
  if (coupon_days.empty()) throw InvalidArgument("coupon schedule must not be empty");
  for (std::size_t i = 0; i < coupon_days.size(); ++i) {
    if (coupon_days[i] < 1 || (i > 0 && coupon_days[i] <= coupon_days[i - 1])) {
      throw InvalidArgument("coupon days must be positive and strictly increasing");
    }
  }
  if (coupon_days.back() != maturity_days) {
    throw InvalidArgument("last coupon day must equal maturity_days");
  }
  if (!(coupon >= 0.0) || !std::isfinite(coupon)) {
    throw InvalidArgument("coupon must be non-negative");
  }
  if (!std::isfinite(funding_rate)) throw InvalidArgument("funding rate must be finite");
  if (std::isnan(coupon_trigger) || std::isnan(notional_trigger) || coupon_trigger < 0.0 ||
      notional_trigger < 0.0) {
    throw InvalidArgument("triggers must be non-negative");
  }
}

void BondTerms::validate() const {
  validate_cashflows();
  if (coupon_trigger > notional_trigger) {
    throw InvalidArgument("coupon trigger must not exceed the notional trigger");
  }
}

BondTerms BondTerms::with_triggers(double coupon_level, double notional_level) const {
  BondTerms copy = *this;
  copy.coupon_trigger = coupon_level;
  copy.notional_trigger = notional_level;
  return copy;
}

double discount_factor(double rate, std::int64_t day) {
  return std::exp(-rate * static_cast<double>(day) / 365.0);
}

double deterministic_price(const BondTerms& terms) {
  terms.validate_cashflows();
  double price = 0.0;
  for (const auto d : terms.coupon_days) price += terms.coupon * discount_factor(terms.funding_rate, d);
  price += terms.notional * discount_factor(terms.funding_rate, terms.maturity_days);
  return price;
}

double deterministic_rate_sensitivity(const BondTerms& terms) {
  terms.validate_cashflows();
  double slope = 0.0;
  for (const auto d : terms.coupon_days) {
    const double t = static_cast<double>(d) / 365.0;
    slope -= terms.coupon * t * discount_factor(terms.funding_rate, d);
  }
  const double tn = static_cast<double>(terms.maturity_days) / 365.0;
  slope -= terms.notional * tn * discount_factor(terms.funding_rate, terms.maturity_days);
  return slope;
}

PaymentFlags evaluate_triggers(const LossPath& path, const BondTerms& terms) {
  terms.validate_cashflows();
  PaymentFlags flags;
  flags.coupons.reserve(terms.coupon_days.size());
  for (const auto d : terms.coupon_days) {
    flags.coupons.push_back(cumulative_loss(path, static_cast<double>(d)) < terms.coupon_trigger);
  }
  flags.notional =
      cumulative_loss(path, static_cast<double>(terms.maturity_days)) < terms.notional_trigger;
  return flags;
}

ScenarioSet simulate_bond_scenarios(const BondTerms& terms, const SimulationConfig& config,
                                    Execution exec) {
  terms.validate_cashflows();
  if (config.horizon_days < terms.maturity_days) {
    throw InvalidArgument("simulation horizon is shorter than the bond maturity");
  }
  return simulate_scenarios(config, terms.coupon_days, exec);
}

PricingResult mc_price(const ScenarioSet& scenarios, const BondTerms& terms, Execution exec) {
  terms.validate_cashflows();
  require_schedule_match(scenarios, terms);
  const auto table = payoff_table(terms);
  const std::size_t n = scenarios.n_paths();

  // Price via per-payment paid fractions (linearity of the mean). Counts are
  // integers, so this is exact under any thread count, and equals the
  // trigger-free formula bitwise when every payment is made.
  const double triggers[] = {terms.coupon_trigger};
  const auto coupon_counts = counts_for(scenarios, triggers, exec);
  std::size_t notional_count = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (scenarios.at(p, scenarios.n_days() - 1) < terms.notional_trigger) ++notional_count;
  }
  const double paths = static_cast<double>(n);
  double price = 0.0;
  for (std::size_t j = 0; j < table.coupon_pv.size(); ++j) {
    price += table.coupon_pv[j] * (static_cast<double>(coupon_counts[j]) / paths);
  }
  price += table.notional_pv * (static_cast<double>(notional_count) / paths);

  std::vector<double> payoffs(n);
  if (exec == Execution::Parallel) {
    kernels::omp::path_payoffs(scenarios, table, payoffs);
  } else {
    kernels::serial::path_payoffs(scenarios, table, payoffs);
  }
  // Shifted two-pass variance: identical payoffs give exactly zero.
  const double shift = payoffs.front();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double v : payoffs) {
    sum += v - shift;
    sum_sq += (v - shift) * (v - shift);
  }
  double std_error = 0.0;
  if (n > 1) {
    const double variance = std::max(0.0, (sum_sq - sum * sum / paths) / (paths - 1.0));
    std_error = std::sqrt(variance / paths);
  }
  return {price, std_error, n};
}

PricingResult mc_price(const BondTerms& terms, const SimulationConfig& config, Execution exec) {
  terms.validate();
  return mc_price(simulate_bond_scenarios(terms, config, exec), terms, exec);
}

std::vector<double> quantile_trigger_grid(std::span<const double> losses, double p_low,
                                          double p_high, std::size_t points) {
  if (points == 0) throw InvalidArgument("trigger grid needs at least one point");
  if (!(p_low <= p_high)) throw InvalidArgument("trigger grid quantiles out of order");
  const double probs[] = {p_low, p_high};
  const auto q = empirical_quantiles(losses, probs);
  if (points == 1) return {q[0]};
  std::vector<double> grid(points);
  const double step = (q[1] - q[0]) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = q[0] + step * static_cast<double>(i);
  grid.back() = q[1];
  return grid;
}

void SurvivalCurve::check_invariants() const {
  const std::size_t m = payment_days.size();
  for (std::size_t t = 0; t < triggers.size(); ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = at(t, j);
      if (!(p >= 0.0 && p <= 1.0)) throw NumericalError("survival probability outside [0, 1]");
      if (j > 0 && p > at(t, j - 1)) {
        throw NumericalError("survival probability increases with payment index");
      }
      for (std::size_t u = 0; u < triggers.size(); ++u) {
        if (triggers[u] < triggers[t] && at(u, j) > p) {
          throw NumericalError("survival probability decreases with the trigger");
        }
      }
    }
  }
}

SurvivalCurve coupon_survival_curve(const ScenarioSet& scenarios, std::span<const double> triggers,
                                    Execution exec) {
  const auto counts = counts_for(scenarios, triggers, exec);
  SurvivalCurve curve{{triggers.begin(), triggers.end()}, scenarios.days(), {}};
  const double n = static_cast<double>(scenarios.n_paths());
  curve.probability.reserve(counts.size());
  for (const auto c : counts) curve.probability.push_back(static_cast<double>(c) / n);
  curve.check_invariants();
  return curve;
}

SurvivalCurve coupon_survival_curve(const BondTerms& terms, const SimulationConfig& config,
                                    std::span<const double> triggers) {
  return coupon_survival_curve(simulate_bond_scenarios(terms, config), triggers);
}

SurvivalCurve notional_survival_curve(const ScenarioSet& scenarios,
                                      std::span<const double> triggers, Execution exec) {
  const auto counts = counts_for(scenarios, triggers, exec);
  const std::size_t m = scenarios.n_days();
  SurvivalCurve curve{{triggers.begin(), triggers.end()}, {scenarios.days().back()}, {}};
  const double n = static_cast<double>(scenarios.n_paths());
  for (std::size_t t = 0; t < triggers.size(); ++t) {
    curve.probability.push_back(static_cast<double>(counts[t * m + m - 1]) / n);
  }
  curve.check_invariants();
  return curve;
}

SurvivalCurve notional_survival_curve(const BondTerms& terms, const SimulationConfig& config,
                                      std::span<const double> triggers) {
  return notional_survival_curve(simulate_bond_scenarios(terms, config), triggers);
}

std::vector<double> probability_of_loss(const ScenarioSet& scenarios,
                                        std::span<const double> triggers, Execution exec) {
  const auto curve = notional_survival_curve(scenarios, triggers, exec);
  std::vector<double> pl;
  pl.reserve(curve.probability.size());
  for (const double p : curve.probability) pl.push_back(1.0 - p);
  return pl;
}

std::vector<double> probability_of_loss(const BondTerms& terms, const SimulationConfig& config,
                                        std::span<const double> triggers) {
  return probability_of_loss(simulate_bond_scenarios(terms, config), triggers);
}

YieldSpread yield_and_spread(double price, double coupon, double funding_rate) {
  if (!(price > 0.0)) throw InvalidArgument("yield is undefined for a non-positive price");
  const double y = coupon / price * 100.0;
  return {y, y - funding_rate * 100.0};
}

GreekBumps GreekBumps::defaults(const BondTerms& terms, const SimulationConfig& config) {
  if (config.severity.size() < 2) {
    throw InvalidArgument("greeks need a severity distribution with two parameters");
  }
  auto bump = [](double v) { return std::max(0.01 * std::abs(v), 1e-4); };
  return {bump(config.frequency.param(0)), bump(config.severity.param(0)),
          bump(config.severity.param(1)), bump(terms.funding_rate)};
}

void GreekBumps::validate() const {
  for (const double h : {lambda, mu, sigma, rate}) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("greek bumps must be positive");
  }
}

Greeks greeks(const BondTerms& terms, const SimulationConfig& config, const GreekBumps& bumps,
              Execution exec) {
  terms.validate();
  bumps.validate();
  if (config.severity.size() < 2) {
    throw InvalidArgument("greeks need a severity distribution with two parameters");
  }
  auto price_with = [&](const SimulationConfig& c) { return mc_price(terms, c, exec).price; };
  auto bumped = [&](bool severity, std::size_t i, double delta) {
    SimulationConfig c = config;
    if (severity) {
      c.severity = config.severity.with_param(i, config.severity.param(i) + delta);
    } else {
      c.frequency = config.frequency.with_param(i, config.frequency.param(i) + delta);
    }
    return c;
  };
  auto central = [&](bool severity, std::size_t i, double h) {
    return (price_with(bumped(severity, i, h)) - price_with(bumped(severity, i, -h))) / (2.0 * h);
  };

  Greeks g;
  g.dS_dlambda = central(false, 0, bumps.lambda);
  g.dS_dmu = central(true, 0, bumps.mu);
  g.dS_dsigma = central(true, 1, bumps.sigma);

  const auto scenarios = simulate_bond_scenarios(terms, config, exec);
  BondTerms up = terms;
  BondTerms down = terms;
  up.funding_rate += bumps.rate;
  down.funding_rate -= bumps.rate;
  g.dS_dr = (mc_price(scenarios, up, exec).price - mc_price(scenarios, down, exec).price) /
            (2.0 * bumps.rate);
  return g;
}

std::string_view prudent_mode_name(PrudentMode mode) noexcept {
  return mode == PrudentMode::Max ? "max" : "min";
}

PrudentMode parse_prudent_mode(std::string_view name) {
  if (name == "max") return PrudentMode::Max;
  if (name == "min") return PrudentMode::Min;
  throw InvalidArgument("prudent mode must be 'max' or 'min'");
}

SimulationConfig with_model_parameters(const SimulationConfig& config,
                                       std::span<const double> params) {
  const std::size_t nf = config.frequency.size();
  const std::size_t ns = config.severity.size();
  if (params.size() != nf + ns) {
    throw InvalidArgument("parameter vector does not match frequency + severity parameters");
  }
  SimulationConfig c = config;
  c.frequency = DistributionSpec::from_params(config.frequency.family(), params.first(nf));
  c.severity = DistributionSpec::from_params(config.severity.family(), params.subspan(nf, ns));
  return c;
}

PrudentResult prudent_price(const BondTerms& terms, const SimulationConfig& config,
                            const ConfidenceBox& box, PrudentMode mode, Execution exec) {
  terms.validate();
  const std::size_t d = box.size();
  if (d != config.frequency.size() + config.severity.size()) {
    throw InvalidArgument("confidence box dimension does not match the model parameters");
  }
  if (d > 16) throw InvalidArgument("confidence box has too many dimensions");

  PrudentResult result;
  auto evaluate = [&](const std::vector<double>& point) {
    ++result.evaluations;
    return mc_price(terms, with_model_parameters(config, point), exec).price;
  };
  auto better = [mode](double a, double b) { return mode == PrudentMode::Max ? a > b : a < b; };

  std::vector<double> best_point(box.estimates);
  for (std::size_t i = 0; i < d; ++i) {
    best_point[i] = 0.5 * (box.bounds[i].lower + box.bounds[i].upper);
  }
  result.center_price = evaluate(best_point);
  double best = result.center_price;

  const std::size_t corners = std::size_t{1} << d;
  for (std::size_t mask = 0; mask < corners; ++mask) {
    std::vector<double> point(d);
    for (std::size_t i = 0; i < d; ++i) {
      point[i] = (mask >> i) & 1U ? box.bounds[i].upper : box.bounds[i].lower;
    }
    const double value = evaluate(point);
    result.corner_prices.push_back(value);
    if (better(value, best)) {
      best = value;
      best_point = point;
    }
  }

  // Coordinate search with step halving, clamped to the box.
  std::vector<double> step(d);
  for (std::size_t i = 0; i < d; ++i) step[i] = 0.25 * box.bounds[i].width();
  for (int halvings = 0; halvings < 4;) {
    bool improved = false;
    for (std::size_t i = 0; i < d; ++i) {
      for (const double sign : {-1.0, 1.0}) {
        auto trial = best_point;
        trial[i] = std::clamp(trial[i] + sign * step[i], box.bounds[i].lower, box.bounds[i].upper);
        if (trial[i] == best_point[i]) continue;
        const double value = evaluate(trial);
        if (better(value, best)) {
          best = value;
          best_point = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) {
      for (auto& s : step) s *= 0.5;
      ++halvings;
    }
  }
  result.price = best;
  result.parameters = best_point;
  return result;
}

}  // namespace cyberbond
