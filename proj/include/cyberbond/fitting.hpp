#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cyberbond/distributions.hpp"

namespace cyberbond {

enum class Optimizer {
  Auto,         // simplex for one parameter, quasi-Newton otherwise
  Simplex,      // Nelder-Mead
  QuasiNewton,  // BFGS, falling back to Nelder-Mead on failure
};

std::string_view optimizer_name(Optimizer optimizer) noexcept;
Optimizer parse_optimizer(std::string_view name);

struct FitResult {
  DistributionSpec spec;
  std::vector<double> standard_errors;  // one per parameter of spec
  double log_likelihood = 0.0;
  bool converged = false;
  std::size_t n_obs = 0;
  Optimizer optimizer = Optimizer::Auto;  // the method that produced `spec`
  std::string message;                    // why converged is false, if it is
};

/// Maximum-likelihood fit. Parameters are optimized on an unconstrained
/// scale (log for positive parameters) from method-of-moments starts, plus a
/// small start grid for the Fisher families. Throws InvalidArgument when
/// `data` is empty or leaves the family support.
FitResult fit_mle(Family family, std::span<const double> data,
                  Optimizer optimizer = Optimizer::Auto);

/// Square roots of the diagonal of the inverse observed information, with
/// the Hessian from central differences (step 1e-4*|p| + 1e-8). Throws
/// NumericalError when the information matrix is not positive definite.
std::vector<double> standard_errors(const DistributionSpec& spec, std::span<const double> data);

/// Observed information (negative log-likelihood Hessian), row-major.
std::vector<double> observed_information(const DistributionSpec& spec,
                                         std::span<const double> data);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Two-sided standard-normal quantile for a central confidence level.
double two_sided_z(double level);

/// Wald interval estimate +/- z * se. Requires se > 0 and level in [0, 1).
Interval confidence_interval(double estimate, double se, double level);

/// Per-parameter intervals over the concatenated parameters of several fits
/// (e.g. frequency rate followed by severity mu and sigma).
struct ConfidenceBox {
  std::vector<std::string> names;
  std::vector<double> estimates;
  std::vector<double> standard_errors;
  std::vector<Interval> bounds;
  double level = 0.0;

  std::size_t size() const noexcept { return estimates.size(); }

  /// Builds a box from published or externally supplied estimates.
  static ConfidenceBox from_estimates(std::vector<std::string> names,
                                      std::vector<double> estimates,
                                      std::vector<double> standard_errors, double level);
};

ConfidenceBox confidence_box(std::span<const FitResult> fits, double level);

}  // namespace cyberbond
