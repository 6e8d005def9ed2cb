#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cyberbond/distributions.hpp"

namespace cyberbond {

enum class GofTest { ChiSquare, KolmogorovSmirnov, CramerVonMises };

std::string_view gof_test_name(GofTest test) noexcept;

struct GofReport {
  GofTest test = GofTest::KolmogorovSmirnov;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<int> df;            // chi-square only
  std::optional<std::size_t> bins;  // chi-square only
  bool low_expected_count = false;  // some bin expected fewer than 1 observation
  std::size_t n_obs = 0;
};

/// D = sup |F_n - F| with the asymptotic Kolmogorov p-value of sqrt(n) D.
/// p-values do not account for estimated parameters.
GofReport ks_test(std::span<const double> data, const DistributionSpec& spec);

/// Default bin count for chi_square_test: max(4, floor(n / 5)).
std::size_t default_chi_square_bins(std::size_t n_obs) noexcept;

/// Pearson statistic over equal-probability bins of `spec`, with
/// df = bins - 1 - n_fitted_params. Requires bins >= 2 + n_fitted_params.
GofReport chi_square_test(std::span<const double> data, const DistributionSpec& spec,
                          std::optional<std::size_t> n_bins = std::nullopt,
                          std::size_t n_fitted_params = 0);

/// Pearson statistic from raw counts against expected counts.
double pearson_statistic(std::span<const double> observed, std::span<const double> expected);

/// T = n w^2 = 1/(12n) + sum (F(x_(i)) - (2i-1)/(2n))^2 with the asymptotic
/// Cramer-von Mises p-value.
GofReport cvm_test(std::span<const double> data, const DistributionSpec& spec);

/// P(K > t) for the Kolmogorov limit distribution.
double kolmogorov_survival(double t);

/// P(W^2 <= t) for the Cramer-von Mises limit distribution.
double cramer_von_mises_cdf(double t);

}  // namespace cyberbond
