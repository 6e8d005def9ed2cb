#include "cyberbond/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cyberbond/errors.hpp"

namespace cyberbond {
namespace {

std::vector<double> sorted_cdf_values(std::span<const double> data, const DistributionSpec& spec) {
  if (data.empty()) throw InvalidArgument("goodness-of-fit test needs at least one observation");
  std::vector<double> u;
  u.reserve(data.size());
  for (double x : data) u.push_back(cdf(spec, x));
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

std::string_view gof_test_name(GofTest test) noexcept {
  switch (test) {
    case GofTest::ChiSquare: return "chi_square";
    case GofTest::KolmogorovSmirnov: return "kolmogorov_smirnov";
    case GofTest::CramerVonMises: return "cramer_von_mises";
  }
  return "unknown";
}

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // Small-t form, which converges fast where the alternating series does not.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      sum += std::exp(-odd * odd * pi2 / (8.0 * t * t));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / t * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double cramer_von_mises_cdf(double t) {
  if (t <= 0.0) return 0.0;
  if (t > 10.0) return 1.0;  // upper tail below 1e-20 here
  double sum = 0.0;
  double coefficient = 1.0;  // Gamma(j + 1/2) / (Gamma(1/2) j!)
  for (int j = 0; j < 1000; ++j) {
    const double odd = 4.0 * j + 1.0;
    const double u = odd * odd / (16.0 * t);
    if (u > 700.0) break;
    const double term = coefficient * std::sqrt(odd) * std::exp(-u) *
                        boost::math::cyl_bessel_k(0.25, u);
    sum += term;
    if (term < 1e-17 * sum) break;
    coefficient *= (j + 0.5) / (j + 1.0);
  }
  return std::clamp(sum / (std::numbers::pi * std::sqrt(t)), 0.0, 1.0);
}

GofReport ks_test(std::span<const double> data, const DistributionSpec& spec) {
  const auto u = sorted_cdf_values(data, spec);
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - u[i];
    const double below = u[i] - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  GofReport report;
  report.test = GofTest::KolmogorovSmirnov;
  report.statistic = d;
  report.p_value = kolmogorov_survival(std::sqrt(n) * d);
  report.n_obs = u.size();
  return report;
}

std::size_t default_chi_square_bins(std::size_t n_obs) noexcept {
  return std::max<std::size_t>(4, n_obs / 5);
}

double pearson_statistic(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw InvalidArgument("observed and expected counts differ in length");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw InvalidArgument("expected counts must be positive");
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

GofReport chi_square_test(std::span<const double> data, const DistributionSpec& spec,
                          std::optional<std::size_t> n_bins, std::size_t n_fitted_params) {
  if (data.empty()) throw InvalidArgument("chi-square test needs at least one observation");
  const std::size_t bins = n_bins.value_or(default_chi_square_bins(data.size()));
  if (bins < 2 + n_fitted_params) {
    throw InvalidArgument("chi-square test needs at least 2 + fitted-parameter bins");
  }
  std::vector<double> observed(bins, 0.0);
  for (double x : data) {
    const double u = cdf(spec, x);
    const auto idx = static_cast<std::size_t>(std::floor(u * static_cast<double>(bins)));
    observed[std::min(idx, bins - 1)] += 1.0;
  }
  const double expected_each = static_cast<double>(data.size()) / static_cast<double>(bins);
  const std::vector<double> expected(bins, expected_each);

  GofReport report;
  report.test = GofTest::ChiSquare;
  report.statistic = pearson_statistic(observed, expected);
  const int df = static_cast<int>(bins) - 1 - static_cast<int>(n_fitted_params);
  report.df = df;
  report.bins = bins;
  report.low_expected_count = expected_each < 1.0;
  report.p_value = report.statistic == 0.0
                       ? 1.0
                       : boost::math::gamma_q(0.5 * df, 0.5 * report.statistic);
  report.n_obs = data.size();
  return report;
}

GofReport cvm_test(std::span<const double> data, const DistributionSpec& spec) {
  const auto u = sorted_cdf_values(data, spec);
  const double n = static_cast<double>(u.size());
  double t = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double target = (2.0 * static_cast<double>(i + 1) - 1.0) / (2.0 * n);
    t += (u[i] - target) * (u[i] - target);
  }
  GofReport report;
  report.test = GofTest::CramerVonMises;
  report.statistic = t;
  report.p_value = 1.0 - cramer_von_mises_cdf(t);
  report.n_obs = u.size();
  return report;
}

}  // namespace cyberbond
