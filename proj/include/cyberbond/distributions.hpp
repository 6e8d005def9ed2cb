#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cyberbond/random.hpp"

namespace cyberbond {

enum class Family {
  Exponential,       // rate (per day)
  LogNormal,         // mu, sigma of log-amount
  Weibull,           // shape k, scale (days)
  Gamma,             // shape, rate (per day)
  ChiSquare,         // degrees of freedom
  Fisher,            // d1, d2
  NoncentralFisher,  // d1, d2, noncentrality
};

inline constexpr std::array<Family, 7> kAllFamilies{
    Family::Exponential, Family::LogNormal, Family::Weibull,         Family::Gamma,
    Family::ChiSquare,   Family::Fisher,    Family::NoncentralFisher};

std::string_view family_name(Family family) noexcept;
/// Accepts the canonical names ("exponential", "lognormal", "weibull", "gamma",
/// "chi_square", "fisher", "noncentral_fisher") and a few common aliases.
Family parse_family(std::string_view name);
std::size_t param_count(Family family) noexcept;
std::span<const std::string_view> param_names(Family family) noexcept;

/// A parametric distribution with validated parameters. Immutable.
class DistributionSpec {
 public:
  static DistributionSpec exponential(double rate);
  static DistributionSpec lognormal(double mu, double sigma);
  static DistributionSpec weibull(double shape, double scale);
  static DistributionSpec gamma(double shape, double rate);
  static DistributionSpec gamma_shape_scale(double shape, double scale);
  static DistributionSpec chi_square(double dof);
  static DistributionSpec fisher(double d1, double d2);
  static DistributionSpec noncentral_fisher(double d1, double d2, double noncentrality);

  /// Throws InvalidArgument on a wrong parameter count or an out-of-domain value.
  static DistributionSpec from_params(Family family, std::span<const double> params);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return {params_.data(), size_}; }
  double param(std::size_t i) const { return params_.at(i); }
  std::size_t size() const noexcept { return size_; }

  /// Same family with parameter `i` replaced (validated).
  DistributionSpec with_param(std::size_t i, double value) const;

  /// Gamma scale = 1 / rate. Only meaningful for Family::Gamma.
  double gamma_scale() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  DistributionSpec(Family family, std::span<const double> params);

  Family family_;
  std::array<double, 3> params_{};
  std::size_t size_ = 0;
};

std::string describe(const DistributionSpec& spec);

double pdf(const DistributionSpec& spec, double x);
double log_pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);
double quantile(const DistributionSpec& spec, double p);

/// Draws in support. One call consumes a fixed number of uniforms from `rng`
/// for every family except NoncentralFisher (which also consumes a fixed
/// three), so identical streams give coupled draws across parameter values.
double sample(const DistributionSpec& spec, RandomStream& rng);

/// Sum of log pdf; -infinity as soon as any point lies outside the support.
double log_likelihood(const DistributionSpec& spec, std::span<const double> data);

/// Analytic mean when finite, nullopt otherwise (e.g. Fisher with d2 <= 2).
std::optional<double> mean(const DistributionSpec& spec);

}  // namespace cyberbond
