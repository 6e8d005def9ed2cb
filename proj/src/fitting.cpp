#include "cyberbond/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>

#include "cyberbond/errors.hpp"
#include "cyberbond/optimize.hpp"

namespace cyberbond {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// LogNormal mu is the only parameter that may be negative; everything else is
// optimized on the log scale.
bool log_scaled(Family family, std::size_t i) { return !(family == Family::LogNormal && i == 0); }

std::vector<double> to_free(Family family, std::span<const double> params) {
  std::vector<double> z(params.begin(), params.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (log_scaled(family, i)) z[i] = std::log(z[i]);
  }
  return z;
}

std::vector<double> from_free(Family family, const std::vector<double>& z) {
  std::vector<double> p = z;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (log_scaled(family, i)) p[i] = std::exp(p[i]);
  }
  return p;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double log_mean = 0.0;
  double log_variance = 0.0;
};

Moments moments(std::span<const double> data) {
  Moments m;
  const double n = static_cast<double>(data.size());
  for (double x : data) {
    m.mean += x;
    m.log_mean += std::log(x);
  }
  m.mean /= n;
  m.log_mean /= n;
  for (double x : data) {
    m.variance += (x - m.mean) * (x - m.mean);
    m.log_variance += (std::log(x) - m.log_mean) * (std::log(x) - m.log_mean);
  }
  m.variance /= n;
  m.log_variance /= n;
  return m;
}

std::vector<std::vector<double>> starting_points(Family family, std::span<const double> data) {
  const Moments m = moments(data);
  const double var = m.variance > 0.0 ? m.variance : m.mean * m.mean;
  switch (family) {
    case Family::Exponential:
      return {{1.0 / m.mean}};
    case Family::LogNormal: {
      const double s2 = std::log1p(var / (m.mean * m.mean));
      return {{std::log(m.mean) - 0.5 * s2, std::sqrt(s2)}};
    }
    case Family::Weibull: {
      const double cv = std::sqrt(var) / m.mean;
      const double k = std::clamp(std::pow(cv, -1.086), 0.05, 50.0);
      return {{k, m.mean / std::tgamma(1.0 + 1.0 / k)}};
    }
    case Family::Gamma:
      return {{m.mean * m.mean / var, m.mean / var}};
    case Family::ChiSquare:
      return {{m.mean}};
    case Family::Fisher: {
      std::vector<std::vector<double>> starts;
      if (m.mean > 1.0) starts.push_back({1.0, std::max(2.5, 2.0 * m.mean / (m.mean - 1.0))});
      for (double d1 : {0.5, 1.0, 2.0}) {
        for (double d2 : {0.5, 1.5, 4.0}) starts.push_back({d1, d2});
      }
      return starts;
    }
    case Family::NoncentralFisher: {
      std::vector<std::vector<double>> starts;
      for (double d1 : {0.5, 1.0}) {
        for (double d2 : {1.5, 2.5, 4.0}) {
          // Match the mean d2 (d1 + nc) / (d1 (d2 - 2)) where it exists.
          double nc = 5.0;
          if (d2 > 2.0) nc = std::clamp(m.mean * d1 * (d2 - 2.0) / d2 - d1, 0.1, 100.0);
          starts.push_back({d1, d2, nc});
          starts.push_back({d1, d2, 10.0});
        }
      }
      return starts;
    }
  }
  return {};
}

// Log-scaled parameters stay within e^{+-30}; beyond that the likelihood is
// flat to working precision and the Fisher families drift off to infinity.
// The noncentrality is capped lower because its series cost grows with it.
bool in_search_box(Family family, const std::vector<double>& z) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) return false;
    const double limit = log_scaled(family, i) ? 30.0 : 700.0;
    if (std::abs(z[i]) > limit) return false;
  }
  if (family == Family::NoncentralFisher && z[2] > std::log(1e4)) return false;
  return true;
}

optimize::Result run(Optimizer optimizer, const optimize::Objective& objective,
                     const std::vector<double>& start, Optimizer& used) {
  if (optimizer == Optimizer::Simplex) {
    used = Optimizer::Simplex;
    return optimize::nelder_mead(objective, start);
  }
  auto qn = optimize::bfgs(objective, start);
  if (qn.converged) {
    used = Optimizer::QuasiNewton;
    return qn;
  }
  used = Optimizer::Simplex;
  auto polished = optimize::nelder_mead(objective, qn.value < kInf ? qn.x : start);
  return polished.value <= qn.value ? polished : qn;
}

}  // namespace

std::string_view optimizer_name(Optimizer optimizer) noexcept {
  switch (optimizer) {
    case Optimizer::Auto: return "auto";
    case Optimizer::Simplex: return "simplex";
    case Optimizer::QuasiNewton: return "quasi-newton";
  }
  return "unknown";
}

Optimizer parse_optimizer(std::string_view name) {
  if (name == "auto") return Optimizer::Auto;
  if (name == "simplex" || name == "nelder-mead") return Optimizer::Simplex;
  if (name == "quasi-newton" || name == "bfgs") return Optimizer::QuasiNewton;
  throw InvalidArgument("unknown optimizer '" + std::string(name) + "'");
}

FitResult fit_mle(Family family, std::span<const double> data, Optimizer optimizer) {
  if (data.empty()) throw InvalidArgument("cannot fit a distribution to an empty sample");
  for (double x : data) {
    if (!std::isfinite(x) || x < 0.0 || (x == 0.0 && family == Family::LogNormal)) {
      throw InvalidArgument("data outside the support of " + std::string(family_name(family)));
    }
  }
  if (optimizer == Optimizer::Auto) {
    optimizer = param_count(family) <= 1 ? Optimizer::Simplex : Optimizer::QuasiNewton;
  }

  const double n = static_cast<double>(data.size());
  const optimize::Objective objective = [&](const std::vector<double>& z) {
    if (!in_search_box(family, z)) return kInf;
    try {
      const auto params = from_free(family, z);
      const auto spec = DistributionSpec::from_params(family, params);
      const double ll = log_likelihood(spec, data);
      return std::isfinite(ll) ? -ll / n : kInf;
    } catch (const InvalidArgument&) {
      return kInf;
    }
  };

  optimize::Result best;
  best.value = kInf;
  Optimizer best_used = optimizer;
  for (const auto& start : starting_points(family, data)) {
    const auto z0 = to_free(family, start);
    if (!std::isfinite(objective(z0))) continue;
    Optimizer used = optimizer;
    auto r = run(optimizer, objective, z0, used);
    if (r.value < best.value) {
      best = std::move(r);
      best_used = used;
    }
  }
  if (!std::isfinite(best.value)) {
    throw NumericalError("no feasible starting point for " + std::string(family_name(family)));
  }

  const auto params = from_free(family, best.x);
  FitResult fit{DistributionSpec::from_params(family, params), {}, -best.value * n,
                best.converged, data.size(), best_used, {}};
  fit.log_likelihood = log_likelihood(fit.spec, data);
  if (!fit.converged) fit.message = "optimizer did not converge";
  try {
    fit.standard_errors = standard_errors(fit.spec, data);
  } catch (const NumericalError& e) {
    fit.standard_errors.assign(fit.spec.size(), std::numeric_limits<double>::quiet_NaN());
    fit.converged = false;
    fit.message = e.what();
  }
  return fit;
}

std::vector<double> observed_information(const DistributionSpec& spec,
                                         std::span<const double> data) {
  const std::size_t k = spec.size();
  const auto base = spec.params();
  std::vector<double> step(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = std::abs(base[i]);
    step[i] = 1e-4 * a + 1e-8;
    // A parameter below ~2e-8 would be pushed out of its domain by the
    // absolute part of the step; keep the step relative there.
    if (a > 0.0 && step[i] > 0.5 * a) step[i] = 1e-4 * a;
  }

  auto ll = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> p(base.begin(), base.end());
    p[i] += di;
    p[j] += dj;
    try {
      return log_likelihood(DistributionSpec::from_params(spec.family(), p), data);
    } catch (const InvalidArgument&) {
      return -kInf;
    }
  };

  const double center = log_likelihood(spec, data);
  std::vector<double> info(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    const double hi = step[i];
    const double second = (ll(i, hi, i, 0.0) - 2.0 * center + ll(i, -hi, i, 0.0)) / (hi * hi);
    info[i * k + i] = -second;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double hj = step[j];
      const double mixed = (ll(i, hi, j, hj) - ll(i, hi, j, -hj) - ll(i, -hi, j, hj) +
                            ll(i, -hi, j, -hj)) /
                           (4.0 * hi * hj);
      info[i * k + j] = -mixed;
      info[j * k + i] = -mixed;
    }
  }
  return info;
}

std::vector<double> standard_errors(const DistributionSpec& spec, std::span<const double> data) {
  const std::size_t k = spec.size();
  const auto info = observed_information(spec, data);
  Eigen::MatrixXd m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = info[i * k + j];
      if (!std::isfinite(v)) throw NumericalError("observed information is not finite");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      (ldlt.vectorD().array() <= 0.0).any()) {
    throw NumericalError("observed information matrix is singular or indefinite");
  }
  const Eigen::MatrixXd covariance = ldlt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  std::vector<double> se(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double v = covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericalError("non-positive variance in inverse information");
    }
    se[i] = std::sqrt(v);
  }
  return se;
}

double two_sided_z(double level) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw InvalidArgument("confidence level must lie in [0, 1)");
  }
  return std::numbers::sqrt2 * boost::math::erf_inv(level);
}

Interval confidence_interval(double estimate, double se, double level) {
  if (!(se > 0.0) || !std::isfinite(se)) {
    throw InvalidArgument("standard error must be positive and finite");
  }
  const double half = two_sided_z(level) * se;
  return {estimate - half, estimate + half};
}

ConfidenceBox ConfidenceBox::from_estimates(std::vector<std::string> names,
                                            std::vector<double> estimates,
                                            std::vector<double> standard_errors, double level) {
  if (names.size() != estimates.size() || estimates.size() != standard_errors.size()) {
    throw InvalidArgument("confidence box: names, estimates and errors differ in length");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidArgument("confidence box level must lie in (0, 1)");
  }
  ConfidenceBox box;
  box.level = level;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    box.bounds.push_back(confidence_interval(estimates[i], standard_errors[i], level));
  }
  box.names = std::move(names);
  box.estimates = std::move(estimates);
  box.standard_errors = std::move(standard_errors);
  return box;
}

ConfidenceBox confidence_box(std::span<const FitResult> fits, double level) {
  std::vector<std::string> names;
  std::vector<double> estimates;
  std::vector<double> errors;
  for (const auto& fit : fits) {
    if (!fit.converged) {
      throw NumericalError("confidence box needs converged fits; " +
                           std::string(family_name(fit.spec.family())) + ": " + fit.message);
    }
    const auto pnames = param_names(fit.spec.family());
    for (std::size_t i = 0; i < fit.spec.size(); ++i) {
      names.emplace_back(pnames[i]);
      estimates.push_back(fit.spec.param(i));
      errors.push_back(fit.standard_errors.at(i));
    }
  }
  return ConfidenceBox::from_estimates(std::move(names), std::move(estimates), std::move(errors),
                                       level);
}

}  // namespace cyberbond
