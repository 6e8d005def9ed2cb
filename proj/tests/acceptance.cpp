// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here and
// every Monte Carlo run uses master seed 2019.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cyberbond/bond.hpp"
#include "cyberbond/cli.hpp"
#include "cyberbond/coupon.hpp"
#include "cyberbond/fitting.hpp"
#include "cyberbond/gof.hpp"
#include "cyberbond/kernels.hpp"
#include "cyberbond/lossmodel.hpp"
#include "cyberbond/random.hpp"

using namespace cyberbond;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 2019;

// Pinned tolerances.
constexpr double kPriceRelTol = 2e-4;
constexpr double kIntervalTol = 1e-3;
constexpr double kSeTol = 5e-5;
constexpr double kQuantileRelTol = 0.15;
constexpr double kPlTolPp = 2.0;
constexpr double kParTolPp = 0.5;
constexpr double kLambdaStressTolPp = 0.8;
constexpr double kMuStressTolPp = 2.0;
constexpr double kRateGreekRelTol = 1e-6;
constexpr double kMleRelTol = 1e-6;
constexpr double kUniformityKs = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

BondTerms paper_bond() {
  BondTerms t;
  t.notional = 15e6;
  t.coupon_days = periodic_schedule(3, 2);
  t.maturity_days = t.coupon_days.back();
  t.coupon = 764055.87;
  t.funding_rate = 0.0152;
  return t;
}

SimulationConfig paper_model() {
  return SimulationConfig{1095, 5000, kSeed, DistributionSpec::exponential(0.0211),
                          DistributionSpec::lognormal(14.9179, 2.3434)};
}

BondTerms greeks_bond() {
  BondTerms t;
  t.notional = 1000.0;
  t.coupon_days = periodic_schedule(5, 2);
  t.maturity_days = t.coupon_days.back();
  t.coupon = 30.0;
  t.funding_rate = 0.0265;
  t.coupon_trigger = 5e9;
  t.notional_trigger = 50e9;
  return t;
}

SimulationConfig greeks_model() {
  return SimulationConfig{1825, 5000, kSeed, DistributionSpec::exponential(0.156),
                          DistributionSpec::lognormal(13.639, 2.832)};
}

double average(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> lognormal_sample_with(double mu, double sigma, std::size_t n) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::log(quantile(DistributionSpec::lognormal(0.0, 1.0), (i + 0.5) / static_cast<double>(n)));
  }
  const double m = average(z);
  double ss = 0.0;
  for (const double v : z) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(mu + sigma * (z[i] - m) / sd);
  return out;
}

double ks_to_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max({d, (i + 1) / n - p[i], p[i] - i / n});
  }
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- criteria --------------------------------------------------------------

Outcome deterministic_price_criterion() {
  const double price = deterministic_price(paper_bond());
  const double rel = std::abs(price - 18797813.26) / 18797813.26;
  return {rel <= kPriceRelTol, fmt("price %.2f", price) + fmt(" rel.err %.2e", rel)};
}

Outcome confidence_interval_criterion() {
  const auto i80 = confidence_interval(0.156, 0.015, 0.80);
  const auto i999 = confidence_interval(0.156, 0.015, 0.999);
  const double err = std::max({std::abs(i80.lower - 0.137), std::abs(i80.upper - 0.175),
                               std::abs(i999.lower - 0.107), std::abs(i999.upper - 0.205)});
  return {err <= kIntervalTol, fmt("80%% (%.4f, ", i80.lower) + fmt("%.4f) ", i80.upper) +
                                   fmt("99.9%% (%.4f, ", i999.lower) + fmt("%.4f)", i999.upper) +
                                   fmt(" max.err %.2e", err)};
}

Outcome standard_error_criterion() {
  const auto fit = fit_mle(Family::LogNormal, lognormal_sample_with(14.9179, 2.3434, 136));
  const double se_mu = fit.standard_errors[0];
  const double se_sigma = fit.standard_errors[1];
  const bool ok = std::abs(se_mu - 0.2009) < kSeTol && std::abs(se_sigma - 0.1421) < kSeTol;
  return {ok, fmt("SE(mu) %.5f", se_mu) + fmt(" SE(sigma) %.5f", se_sigma) + " on n=136"};
}

Outcome loss_quantile_criterion() {
  const auto paths = simulate_paths(paper_model());
  std::vector<double> totals;
  for (const auto& p : paths) totals.push_back(total_loss(p));
  const double probs[] = {0.90};
  const double q90 = empirical_quantiles(totals, probs)[0];
  const double rel = std::abs(q90 - 2.04e9) / 2.04e9;
  return {rel <= kQuantileRelTol, fmt("q90 %.4g", q90) + fmt(" rel.err %.3f", rel)};
}

struct CouponRun {
  double average_pl_pct = 0.0;
  double par = 0.0;
  double par_lambda = 0.0;
  double par_mu = 0.0;
};

CouponRun coupon_run() {
  const auto terms = paper_bond();
  const auto model = paper_model();
  const auto base = simulate_bond_scenarios(terms, model);
  const auto finals = base.final_losses();
  const auto coupon_grid = quantile_trigger_grid(finals, 0.10, 0.90, 20);
  const auto notional_grid = quantile_trigger_grid(finals, 0.10, 0.99, 20);

  CouponRun r;
  r.average_pl_pct = average(probability_of_loss(base, notional_grid)) * 100.0;
  r.par = par_yield_mc(base, terms, coupon_grid, notional_grid).average_pct;

  // Stressed runs keep the base-case trigger grids.
  auto lambda_up = model;
  lambda_up.frequency = DistributionSpec::exponential(0.0211 * 1.25);
  r.par_lambda =
      par_yield_mc(simulate_bond_scenarios(terms, lambda_up), terms, coupon_grid, notional_grid).average_pct;
  auto mu_up = model;
  mu_up.severity = DistributionSpec::lognormal(14.9179 * 1.05, 2.3434);
  r.par_mu = par_yield_mc(simulate_bond_scenarios(terms, mu_up), terms, coupon_grid, notional_grid).average_pct;
  return r;
}

Outcome probability_of_loss_criterion(const CouponRun& r) {
  return {std::abs(r.average_pl_pct - 11.58) <= kPlTolPp, fmt("average PL %.3f%%", r.average_pl_pct)};
}

Outcome coupon_rate_criterion(const CouponRun& r) {
  const double pl = coupon_rate_pl(2.05, 11.58);
  const bool ok = std::abs(pl - 13.63) < 1e-12 && std::abs(r.par - 5.09) <= kParTolPp &&
                  std::abs(r.par_lambda - 6.52) <= kLambdaStressTolPp &&
                  std::abs(r.par_mu - 10.92) <= kMuStressTolPp;
  return {ok, fmt("PL %.2f%%", pl) + fmt(" par %.3f%%", r.par) + fmt(" lambda+25%% %.3f%%", r.par_lambda) +
                  fmt(" mu+5%% %.3f%%", r.par_mu)};
}

Outcome greeks_criterion() {
  const auto terms = greeks_bond();
  const auto model = greeks_model();
  const auto bumps = GreekBumps::defaults(terms, model);
  const auto box = ConfidenceBox::from_estimates({"rate", "mu", "sigma"}, {0.156, 13.639, 2.832},
                                                 {0.015, 0.268, 0.189}, 0.99);
  std::vector<double> lower, upper;
  for (const auto& b : box.bounds) {
    lower.push_back(b.lower);
    upper.push_back(b.upper);
  }
  const auto mid = greeks(terms, model, bumps);
  const auto lo = greeks(terms, with_model_parameters(model, lower), bumps);
  const auto hi = greeks(terms, with_model_parameters(model, upper), bumps);

  bool negative = mid.dS_dr < 0.0;
  for (const auto* g : {&lo, &mid, &hi}) {
    negative = negative && g->dS_dlambda < 0.0 && g->dS_dmu < 0.0 && g->dS_dsigma < 0.0;
  }
  // Published ordering: each risk sensitivity grows in magnitude from the
  // lower to the upper bound of the box.
  const auto ordered = [](double a, double b, double c) { return std::abs(a) < std::abs(b) && std::abs(b) < std::abs(c); };
  const bool ordering = ordered(lo.dS_dlambda, mid.dS_dlambda, hi.dS_dlambda) &&
                        ordered(lo.dS_dmu, mid.dS_dmu, hi.dS_dmu) &&
                        ordered(lo.dS_dsigma, mid.dS_dsigma, hi.dS_dsigma);

  auto free = terms.with_triggers(kNoTrigger, kNoTrigger);
  const double fd = greeks(free, model, bumps).dS_dr;
  const double analytic = deterministic_rate_sensitivity(free);
  const double rel = std::abs(fd - analytic) / std::abs(analytic);

  std::string detail = fmt("middle dS/dlambda %.1f", mid.dS_dlambda) + fmt(" dS/dmu %.2f", mid.dS_dmu) +
                       fmt(" dS/dsigma %.2f", mid.dS_dsigma) + fmt(" dS/dr %.1f", mid.dS_dr) +
                       (negative ? "; all negative" : "; SIGN MISMATCH") +
                       (ordering ? "; |lower|<|middle|<|upper|" : "; ORDERING MISMATCH") +
                       fmt("; no-trigger dS/dr rel.err %.2e", rel);
  return {negative && ordering && rel <= kRateGreekRelTol, detail};
}

Outcome property_criterion() {
  std::vector<std::string> failures;

  // MLE against closed forms.
  {
    RandomStream rng(kSeed);
    std::vector<double> x(400), y(400);
    for (auto& v : x) v = sample(DistributionSpec::exponential(0.0211), rng);
    for (auto& v : y) v = sample(DistributionSpec::lognormal(14.9179, 2.3434), rng);
    const double rate = 1.0 / average(x);
    std::vector<double> logs;
    for (const double v : y) logs.push_back(std::log(v));
    const double mu = average(logs);
    double ss = 0.0;
    for (const double v : logs) ss += (v - mu) * (v - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(logs.size()));
    const auto fe = fit_mle(Family::Exponential, x);
    const auto fl = fit_mle(Family::LogNormal, y);
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    if (rel(fe.spec.param(0), rate) > kMleRelTol || rel(fl.spec.param(0), mu) > kMleRelTol ||
        rel(fl.spec.param(1), sigma) > kMleRelTol) {
      failures.push_back("mle");
    }
  }

  // GOF p-values uniform under the null.
  double worst_ks = 0.0;
  {
    const auto s = DistributionSpec::lognormal(14.9179, 2.3434);
    RandomStream rng(kSeed + 1);
    std::vector<double> ks, cvm;
    for (int rep = 0; rep < 500; ++rep) {
      std::vector<double> x(100);
      for (auto& v : x) v = sample(s, rng);
      ks.push_back(ks_test(x, s).p_value);
      cvm.push_back(cvm_test(x, s).p_value);
    }
    worst_ks = std::max(ks_to_uniform(ks), ks_to_uniform(cvm));
    if (worst_ks >= kUniformityKs) failures.push_back("gof-uniformity");
  }

  // Survival curves monotone in trigger and payment index.
  {
    const auto terms = paper_bond();
    const auto scenarios = simulate_bond_scenarios(terms, paper_model());
    const auto grid = quantile_trigger_grid(scenarios.final_losses(), 0.10, 0.99, 20);
    try {
      coupon_survival_curve(scenarios, grid).check_invariants();
      notional_survival_curve(scenarios, grid).check_invariants();
    } catch (const std::exception&) {
      failures.push_back("survival-monotonicity");
    }
    // Infinite triggers reproduce the deterministic price bitwise.
    const auto r = mc_price(scenarios, terms);
    if (r.price != deterministic_price(terms) || r.mc_std_error != 0.0) failures.push_back("mc-vs-deterministic");
  }

  // Byte-identical command output for different worker counts.
  {
    const fs::path config = fs::path(CYBERBOND_DATA_DIR) / "configs" / "greeks.json";
    const fs::path root = fs::temp_directory_path() / "cyberbond_acceptance";
    fs::remove_all(root);
    std::vector<fs::path> dirs;
    for (const char* threads : {"1", "2", "4"}) {
      const fs::path dir = root / threads;
      dirs.push_back(dir);
      const std::string cfg = config.string(), out = dir.string();
      const char* argv[] = {"cyberbond", "price",   "--config", cfg.c_str(), "--out-dir",
                            out.c_str(), "--paths", "2000",     "--threads", threads};
      std::ostringstream sink;
      if (cli::run(10, argv, sink, sink) != 0) failures.push_back(std::string("cli-run-") + threads);
    }
    kernels::omp::set_threads(1);
    bool identical = true;
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      ++files;
      const auto text = slurp(entry.path());
      for (std::size_t k = 1; k < dirs.size(); ++k) {
        identical = identical && text == slurp(dirs[k] / entry.path().filename());
      }
    }
    if (!identical || files == 0) failures.push_back("thread-determinism");
    fs::remove_all(root);
  }

  std::string detail = fmt("p-value KS distance %.3f", worst_ks);
  if (failures.empty()) {
    detail += "; mle, uniformity, survival, bitwise mc, thread determinism ok";
  } else {
    for (const auto& f : failures) detail += "; FAILED " + f;
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const CouponRun coupons = coupon_run();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"deterministic price", deterministic_price_criterion},
      {"confidence intervals", confidence_interval_criterion},
      {"standard-error identities", standard_error_criterion},
      {"90% total-loss quantile", loss_quantile_criterion},
      {"average probability of loss", [&] { return probability_of_loss_criterion(coupons); }},
      {"coupon rates", [&] { return coupon_rate_criterion(coupons); }},
      {"greeks", greeks_criterion},
      {"property suites", property_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
