#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "cyberbond/errors.hpp"
#include "cyberbond/fitting.hpp"
#include "cyberbond/random.hpp"
#include "doctest.h"

using namespace cyberbond;

namespace {

std::vector<double> draws(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample(spec, rng);
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Log-data with exactly the requested mean and population standard deviation.
std::vector<double> lognormal_sample_with(double mu, double sigma, std::size_t n) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = quantile(DistributionSpec::lognormal(0.0, 1.0), (i + 0.5) / static_cast<double>(n));
    z[i] = std::log(z[i]);
  }
  const double m = mean_of(z);
  double ss = 0.0;
  for (double v : z) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(mu + sigma * (z[i] - m) / sd);
  return out;
}

// Intervals with exactly the requested mean.
std::vector<double> exponential_sample_with_mean(double m, std::size_t n) {
  auto x = draws(DistributionSpec::exponential(1.0), n, 17);
  const double scale = m / mean_of(x);
  for (auto& v : x) v *= scale;
  return x;
}

}  // namespace

TEST_CASE("numeric MLE equals the closed forms") {
  for (const auto opt : {Optimizer::Auto, Optimizer::Simplex, Optimizer::QuasiNewton}) {
    CAPTURE(optimizer_name(opt));
    const auto x = draws(DistributionSpec::exponential(0.0211), 500, 3);
    const auto fe = fit_mle(Family::Exponential, x, opt);
    CHECK(fe.converged);
    CHECK(fe.spec.param(0) == doctest::Approx(1.0 / mean_of(x)).epsilon(1e-6));

    const auto y = draws(DistributionSpec::lognormal(14.9179, 2.3434), 400, 4);
    std::vector<double> logs(y.size());
    std::transform(y.begin(), y.end(), logs.begin(), [](double v) { return std::log(v); });
    const double mu = mean_of(logs);
    double ss = 0.0;
    for (double v : logs) ss += (v - mu) * (v - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(logs.size()));
    const auto fl = fit_mle(Family::LogNormal, y, opt);
    CHECK(fl.converged);
    CHECK(fl.spec.param(0) == doctest::Approx(mu).epsilon(1e-6));
    CHECK(fl.spec.param(1) == doctest::Approx(sigma).epsilon(1e-6));
  }
}

TEST_CASE("exponential fit of intervals with mean 6.41 days gives 0.156") {
  const auto x = exponential_sample_with_mean(6.41, 108);
  CHECK(fit_mle(Family::Exponential, x).spec.param(0) == doctest::Approx(0.156).epsilon(2e-3));
}

TEST_CASE("large synthetic sample recovers the rate within 3 sigma") {
  const double lambda = 0.02;
  const std::size_t n = 10000;
  const auto x = draws(DistributionSpec::exponential(lambda), n, 2024);
  const auto f = fit_mle(Family::Exponential, x);
  CHECK(std::abs(f.spec.param(0) - lambda) < 3.0 * lambda / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("multi-parameter families recover their generating parameters") {
  struct Case {
    DistributionSpec truth;
    double tolerance;
  };
  const std::vector<Case> cases = {
      {DistributionSpec::weibull(0.8, 30.0), 0.05},
      {DistributionSpec::gamma(1.7, 0.05), 0.08},
      {DistributionSpec::chi_square(6.0), 0.05},
      {DistributionSpec::fisher(4.0, 10.0), 0.25},
      {DistributionSpec::noncentral_fisher(2.0, 12.0, 6.0), 0.35},
  };
  std::uint64_t seed = 50;
  for (const auto& c : cases) {
    CAPTURE(describe(c.truth));
    const auto x = draws(c.truth, 4000, seed++);
    const auto f = fit_mle(c.truth.family(), x);
    CHECK(f.converged);
    for (std::size_t i = 0; i < f.spec.size(); ++i) {
      CHECK(f.spec.param(i) == doctest::Approx(c.truth.param(i)).epsilon(c.tolerance));
      CHECK(f.standard_errors[i] > 0.0);
    }
    // The MLE beats the generating parameters on its own sample.
    CHECK(f.log_likelihood >= log_likelihood(c.truth, x));
  }
}

TEST_CASE("fitting is invariant to permutation") {
  auto x = draws(DistributionSpec::weibull(1.3, 20.0), 300, 8);
  const auto a = fit_mle(Family::Weibull, x);
  std::mt19937 g(1);
  std::shuffle(x.begin(), x.end(), g);
  const auto b = fit_mle(Family::Weibull, x);
  CHECK(a.spec.param(0) == doctest::Approx(b.spec.param(0)).epsilon(1e-6));
  CHECK(a.spec.param(1) == doctest::Approx(b.spec.param(1)).epsilon(1e-6));
}

TEST_CASE("data outside the support is rejected") {
  const std::vector<double> bad = {1.0, -2.0};
  CHECK_THROWS_AS(fit_mle(Family::Exponential, bad), InvalidArgument);
  const std::vector<double> zero = {1.0, 0.0};
  CHECK_THROWS_AS(fit_mle(Family::LogNormal, zero), InvalidArgument);
  CHECK_THROWS_AS(fit_mle(Family::Gamma, std::vector<double>{}), InvalidArgument);
}

TEST_CASE("observed-information standard errors match closed forms") {
  const auto x = draws(DistributionSpec::exponential(0.05), 250, 11);
  const auto fe = fit_mle(Family::Exponential, x);
  CHECK(fe.standard_errors[0] ==
        doctest::Approx(fe.spec.param(0) / std::sqrt(250.0)).epsilon(1e-4));

  const auto y = draws(DistributionSpec::lognormal(10.0, 1.7), 180, 12);
  const auto fl = fit_mle(Family::LogNormal, y);
  const double s = fl.spec.param(1);
  CHECK(fl.standard_errors[0] == doctest::Approx(s / std::sqrt(180.0)).epsilon(1e-4));
  CHECK(fl.standard_errors[1] == doctest::Approx(s / std::sqrt(360.0)).epsilon(1e-4));
}

TEST_CASE("published standard errors follow from sample size") {
  // Exponential frequency: 53 unique intervals at rate 0.0211.
  const auto intervals = exponential_sample_with_mean(1.0 / 0.0211, 53);
  const auto fe = fit_mle(Family::Exponential, intervals);
  CHECK(fe.spec.param(0) == doctest::Approx(0.0211).epsilon(1e-6));
  CHECK(std::round(fe.standard_errors[0] * 1e4) / 1e4 == doctest::Approx(0.0029));

  // Log-normal severity: 136 losses, sigma 2.3434.
  const auto losses = lognormal_sample_with(14.9179, 2.3434, 136);
  const auto fl = fit_mle(Family::LogNormal, losses);
  CHECK(fl.spec.param(0) == doctest::Approx(14.9179).epsilon(1e-7));
  CHECK(fl.spec.param(1) == doctest::Approx(2.3434).epsilon(1e-7));
  CHECK(std::abs(fl.standard_errors[0] - 0.2009) < 5e-5);
  CHECK(std::abs(fl.standard_errors[1] - 0.1421) < 5e-5);

  // Earlier loss fit: sigma 2.832 with SE 0.189 implies about 112 losses.
  const auto earlier = lognormal_sample_with(13.639, 2.832, 112);
  CHECK(std::abs(fit_mle(Family::LogNormal, earlier).standard_errors[1] - 0.189) < 5e-4);
}

TEST_CASE("Wald confidence intervals") {
  const auto i80 = confidence_interval(0.156, 0.015, 0.80);
  CHECK(std::abs(i80.lower - 0.137) < 1e-3);
  CHECK(std::abs(i80.upper - 0.175) < 1e-3);
  const auto i999 = confidence_interval(0.156, 0.015, 0.999);
  CHECK(std::abs(i999.lower - 0.107) < 1e-3);
  CHECK(std::abs(i999.upper - 0.205) < 1e-3);
  CHECK(two_sided_z(0.80) == doctest::Approx(1.2815515655446004).epsilon(1e-12));
  CHECK(two_sided_z(0.999) == doctest::Approx(3.2905267314918945).epsilon(1e-12));

  const auto point = confidence_interval(0.156, 0.015, 0.0);
  CHECK(point.lower == 0.156);
  CHECK(point.upper == 0.156);

  double previous = 0.0;
  for (const double level : {0.5, 0.8, 0.9, 0.97, 0.99, 0.999}) {
    const double w = confidence_interval(1.0, 0.2, level).width();
    CHECK(w > previous);
    previous = w;
  }
  CHECK_THROWS_AS(confidence_interval(1.0, 0.0, 0.9), InvalidArgument);
  CHECK_THROWS_AS(confidence_interval(1.0, 0.1, 1.0), InvalidArgument);
}

TEST_CASE("confidence box from published estimates") {
  const auto box = ConfidenceBox::from_estimates({"rate", "mu", "sigma"}, {0.156, 13.639, 2.832},
                                                 {0.015, 0.268, 0.189}, 0.99);
  // The published bounds were computed from unrounded standard errors, so
  // allow for the rounding of the quoted ones.
  const double lower[] = {0.118, 12.950, 2.344};
  const double upper[] = {0.194, 14.328, 3.319};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(box.bounds[i].lower - lower[i]) < 2e-3);
    CHECK(std::abs(box.bounds[i].upper - upper[i]) < 2e-3);
    CHECK(box.bounds[i].lower < box.estimates[i]);
    CHECK(box.estimates[i] < box.bounds[i].upper);
  }
  CHECK_THROWS_AS(
      ConfidenceBox::from_estimates({"rate"}, {0.156}, {0.0}, 0.99), InvalidArgument);
}

TEST_CASE("single-parameter box equals its interval") {
  const auto x = draws(DistributionSpec::exponential(0.1), 200, 5);
  const auto f = fit_mle(Family::Exponential, x);
  const FitResult fits[] = {f};
  const auto box = confidence_box(fits, 0.95);
  const auto i = confidence_interval(f.spec.param(0), f.standard_errors[0], 0.95);
  CHECK(box.bounds[0].lower == i.lower);
  CHECK(box.bounds[0].upper == i.upper);
  CHECK(box.names[0] == "rate");
}
