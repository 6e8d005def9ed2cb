#include "cyberbond/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "cyberbond/errors.hpp"

namespace cyberbond {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::string_view kExponentialNames[] = {"rate"};
constexpr std::string_view kLogNormalNames[] = {"mu", "sigma"};
constexpr std::string_view kWeibullNames[] = {"shape", "scale"};
constexpr std::string_view kGammaNames[] = {"shape", "rate"};
constexpr std::string_view kChiSquareNames[] = {"dof"};
constexpr std::string_view kFisherNames[] = {"d1", "d2"};
constexpr std::string_view kNoncentralFisherNames[] = {"d1", "d2", "noncentrality"};

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// log of x^(a-1) * b^a * e^(-b x) / Gamma(a), x >= 0.
double gamma_log_pdf(double shape, double rate, double x) {
  if (x < 0.0) return -kInf;
  if (x == 0.0) {
    if (shape < 1.0) return kInf;
    if (shape == 1.0) return std::log(rate);
    return -kInf;
  }
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

// Poisson(h)-weighted sums over j, started at the mode and extended both ways
// until the weights drop below kWeightFloor (relative to the modal weight)
// or j leaves mode +/- (12 sqrt(h) + 30). The neglected Poisson mass is far
// below 1e-13, and every summand is a weight times a probability (cdf) or a
// beta density (pdf), so the series truncation error is bounded accordingly.
constexpr double kWeightFloor = 1e-18;

template <class Term>
double poisson_mixture(double h, Term term) {
  if (h == 0.0) return term(0.0);
  const double mode = std::floor(h);
  const double reach = std::ceil(12.0 * std::sqrt(h) + 30.0);
  const double w0 = std::exp(-h + mode * std::log(h) - std::lgamma(mode + 1.0));
  double sum = 0.0;
  double w = w0;
  for (double j = mode; j <= mode + reach; j += 1.0) {
    sum += w * term(j);
    w *= h / (j + 1.0);
    if (w < kWeightFloor * w0) break;
  }
  w = w0;
  for (double j = mode - 1.0; j >= std::max(0.0, mode - reach); j -= 1.0) {
    w *= (j + 1.0) / h;
    if (w < kWeightFloor * w0) break;
    sum += w * term(j);
  }
  return sum;
}

// Noncentral beta(a, b, lambda) distribution function at y, as a Poisson
// mixture of regularized incomplete beta functions.
double noncentral_beta_cdf(double a, double b, double noncentrality, double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double sum = poisson_mixture(0.5 * noncentrality,
                                     [&](double j) { return boost::math::ibeta(a + j, b, y); });
  return std::clamp(sum, 0.0, 1.0);
}

double noncentral_beta_pdf(double a, double b, double noncentrality, double y) {
  const double log_y = std::log(y);
  const double log_1my = std::log1p(-y);
  return poisson_mixture(0.5 * noncentrality, [&](double j) {
    const double aj = a + j;
    return std::exp((aj - 1.0) * log_y + (b - 1.0) * log_1my - log_beta(aj, b));
  });
}

// Smallest j with P(J <= j) >= u for J ~ Poisson(h). Sequential search while
// e^{-h} is representable, Boost's discrete quantile beyond that.
std::size_t poisson_inverse(double h, double u) {
  if (h > 500.0) {
    using Policy = boost::math::policies::policy<
        boost::math::policies::discrete_quantile<boost::math::policies::integer_round_up>>;
    return static_cast<std::size_t>(
        boost::math::quantile(boost::math::poisson_distribution<double, Policy>(h), u));
  }
  double weight = std::exp(-h);
  double cumulative = weight;
  std::size_t j = 0;
  const auto limit = static_cast<std::size_t>(h + 40.0 * std::sqrt(h + 1.0) + 60.0);
  while (u > cumulative && j < limit) {
    ++j;
    weight *= h / static_cast<double>(j);
    cumulative += weight;
  }
  return j;
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate(Family family, std::span<const double> p) {
  if (p.size() != param_count(family)) {
    throw InvalidArgument(std::string(family_name(family)) + " expects " +
                          std::to_string(param_count(family)) + " parameters, got " +
                          std::to_string(p.size()));
  }
  switch (family) {
    case Family::Exponential:
      require(positive(p[0]), "exponential rate must be positive");
      break;
    case Family::LogNormal:
      require(std::isfinite(p[0]), "lognormal mu must be finite");
      require(positive(p[1]), "lognormal sigma must be positive");
      break;
    case Family::Weibull:
      require(positive(p[0]) && positive(p[1]), "weibull shape and scale must be positive");
      break;
    case Family::Gamma:
      require(positive(p[0]) && positive(p[1]), "gamma shape and rate must be positive");
      break;
    case Family::ChiSquare:
      require(positive(p[0]), "chi-square degrees of freedom must be positive");
      break;
    case Family::Fisher:
      require(positive(p[0]) && positive(p[1]), "fisher degrees of freedom must be positive");
      break;
    case Family::NoncentralFisher:
      require(positive(p[0]) && positive(p[1]),
              "noncentral fisher degrees of freedom must be positive");
      require(std::isfinite(p[2]) && p[2] >= 0.0, "noncentrality must be non-negative");
      break;
  }
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::Exponential: return "exponential";
    case Family::LogNormal: return "lognormal";
    case Family::Weibull: return "weibull";
    case Family::Gamma: return "gamma";
    case Family::ChiSquare: return "chi_square";
    case Family::Fisher: return "fisher";
    case Family::NoncentralFisher: return "noncentral_fisher";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  if (key == "exponential" || key == "exp") return Family::Exponential;
  if (key == "lognormal" || key == "log_normal" || key == "lognorm") return Family::LogNormal;
  if (key == "weibull") return Family::Weibull;
  if (key == "gamma") return Family::Gamma;
  if (key == "chi_square" || key == "chisquare" || key == "chi2") return Family::ChiSquare;
  if (key == "fisher" || key == "f") return Family::Fisher;
  if (key == "noncentral_fisher" || key == "noncentral_f" || key == "ncf")
    return Family::NoncentralFisher;
  throw InvalidArgument("unknown distribution family '" + std::string(name) + "'");
}

std::size_t param_count(Family family) noexcept { return param_names(family).size(); }

std::span<const std::string_view> param_names(Family family) noexcept {
  switch (family) {
    case Family::Exponential: return kExponentialNames;
    case Family::LogNormal: return kLogNormalNames;
    case Family::Weibull: return kWeibullNames;
    case Family::Gamma: return kGammaNames;
    case Family::ChiSquare: return kChiSquareNames;
    case Family::Fisher: return kFisherNames;
    case Family::NoncentralFisher: return kNoncentralFisherNames;
  }
  return {};
}

DistributionSpec::DistributionSpec(Family family, std::span<const double> params)
    : family_(family), size_(params.size()) {
  validate(family, params);
  std::copy(params.begin(), params.end(), params_.begin());
}

DistributionSpec DistributionSpec::from_params(Family family, std::span<const double> params) {
  return DistributionSpec(family, params);
}

DistributionSpec DistributionSpec::exponential(double rate) {
  const double p[] = {rate};
  return DistributionSpec(Family::Exponential, p);
}

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
  const double p[] = {mu, sigma};
  return DistributionSpec(Family::LogNormal, p);
}

DistributionSpec DistributionSpec::weibull(double shape, double scale) {
  const double p[] = {shape, scale};
  return DistributionSpec(Family::Weibull, p);
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
  const double p[] = {shape, rate};
  return DistributionSpec(Family::Gamma, p);
}

DistributionSpec DistributionSpec::gamma_shape_scale(double shape, double scale) {
  require(positive(scale), "gamma scale must be positive");
  return gamma(shape, 1.0 / scale);
}

DistributionSpec DistributionSpec::chi_square(double dof) {
  const double p[] = {dof};
  return DistributionSpec(Family::ChiSquare, p);
}

DistributionSpec DistributionSpec::fisher(double d1, double d2) {
  const double p[] = {d1, d2};
  return DistributionSpec(Family::Fisher, p);
}

DistributionSpec DistributionSpec::noncentral_fisher(double d1, double d2, double noncentrality) {
  const double p[] = {d1, d2, noncentrality};
  return DistributionSpec(Family::NoncentralFisher, p);
}

DistributionSpec DistributionSpec::with_param(std::size_t i, double value) const {
  auto copy = params_;
  copy.at(i) = value;
  return DistributionSpec(family_, std::span<const double>(copy.data(), size_));
}

double DistributionSpec::gamma_scale() const {
  if (family_ != Family::Gamma) throw InvalidArgument("gamma_scale on a non-gamma spec");
  return 1.0 / params_[1];
}

std::string describe(const DistributionSpec& spec) {
  std::ostringstream out;
  out.precision(6);
  out << family_name(spec.family()) << '(';
  const auto names = param_names(spec.family());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (i) out << ", ";
    out << names[i] << '=' << spec.param(i);
  }
  out << ')';
  return out.str();
}

double log_pdf(const DistributionSpec& spec, double x) {
  if (std::isnan(x)) return kNaN;
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::Exponential:
      if (x < 0.0) return -kInf;
      return std::log(p[0]) - p[0] * x;
    case Family::LogNormal: {
      if (x <= 0.0) return -kInf;
      const double lx = std::log(x);
      const double z = (lx - p[0]) / p[1];
      return -lx - std::log(p[1]) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
    }
    case Family::Weibull: {
      const double k = p[0];
      const double scale = p[1];
      if (x < 0.0) return -kInf;
      if (x == 0.0) {
        if (k < 1.0) return kInf;
        if (k == 1.0) return -std::log(scale);
        return -kInf;
      }
      const double r = x / scale;
      return std::log(k / scale) + (k - 1.0) * std::log(r) - std::pow(r, k);
    }
    case Family::Gamma:
      return gamma_log_pdf(p[0], p[1], x);
    case Family::ChiSquare:
      return gamma_log_pdf(0.5 * p[0], 0.5, x);
    case Family::Fisher: {
      const double d1 = p[0];
      const double d2 = p[1];
      if (x < 0.0) return -kInf;
      if (x == 0.0) {
        if (d1 < 2.0) return kInf;
        if (d1 == 2.0) return 0.0;  // density 1 at the origin
        return -kInf;
      }
      // Written with log1p so that no large terms cancel when d1 or d2 is big.
      const double r = d1 * x / d2;
      return -0.5 * d1 * std::log1p(1.0 / r) - 0.5 * d2 * std::log1p(r) - std::log(x) -
             log_beta(0.5 * d1, 0.5 * d2);
    }
    case Family::NoncentralFisher: {
      const double d1 = p[0];
      const double d2 = p[1];
      if (x < 0.0) return -kInf;
      if (x == 0.0) {
        if (d1 < 2.0) return kInf;
        if (d1 == 2.0) return -0.5 * p[2];
        return -kInf;
      }
      const double denom = d1 * x + d2;
      const double y = d1 * x / denom;
      const double jacobian = d1 * d2 / (denom * denom);
      const double density = noncentral_beta_pdf(0.5 * d1, 0.5 * d2, p[2], y);
      return std::log(density) + std::log(jacobian);
    }
  }
  return kNaN;
}

double pdf(const DistributionSpec& spec, double x) { return std::exp(log_pdf(spec, x)); }

double cdf(const DistributionSpec& spec, double x) {
  if (std::isnan(x)) return kNaN;
  const auto p = spec.params();
  if (x <= 0.0) return 0.0;  // every family is supported on [0, inf) or (0, inf)
  if (x == kInf) return 1.0;
  switch (spec.family()) {
    case Family::Exponential:
      return -std::expm1(-p[0] * x);
    case Family::LogNormal:
      return standard_normal_cdf((std::log(x) - p[0]) / p[1]);
    case Family::Weibull:
      return -std::expm1(-std::pow(x / p[1], p[0]));
    case Family::Gamma:
      return boost::math::gamma_p(p[0], p[1] * x);
    case Family::ChiSquare:
      return boost::math::gamma_p(0.5 * p[0], 0.5 * x);
    case Family::Fisher: {
      const double y = p[0] * x / (p[0] * x + p[1]);
      return boost::math::ibeta(0.5 * p[0], 0.5 * p[1], y);
    }
    case Family::NoncentralFisher: {
      const double y = p[0] * x / (p[0] * x + p[1]);
      return noncentral_beta_cdf(0.5 * p[0], 0.5 * p[1], p[2], y);
    }
  }
  return kNaN;
}

double quantile(const DistributionSpec& spec, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw InvalidArgument("quantile probability must lie in (0, 1)");
  }
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::Exponential:
      return -std::log1p(-prob) / p[0];
    case Family::LogNormal:
      return std::exp(p[0] + p[1] * standard_normal_quantile(prob));
    case Family::Weibull:
      return p[1] * std::pow(-std::log1p(-prob), 1.0 / p[0]);
    case Family::Gamma:
      return boost::math::gamma_p_inv(p[0], prob) / p[1];
    case Family::ChiSquare:
      return 2.0 * boost::math::gamma_p_inv(0.5 * p[0], prob);
    case Family::Fisher: {
      const double y = boost::math::ibeta_inv(0.5 * p[0], 0.5 * p[1], prob);
      return p[1] * y / (p[0] * (1.0 - y));
    }
    case Family::NoncentralFisher: {
      // Root of the noncentral beta distribution function on (0, 1), mapped
      // back to the F scale.
      const double a = 0.5 * p[0];
      const double b = 0.5 * p[1];
      auto residual = [&](double y) { return noncentral_beta_cdf(a, b, p[2], y) - prob; };
      std::uintmax_t max_iter = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          residual, 0.0, 1.0, -prob, 1.0 - prob, boost::math::tools::eps_tolerance<double>(52),
          max_iter);
      const double y = 0.5 * (lo + hi);
      if (y >= 1.0) throw NumericalError("noncentral fisher quantile overflow");
      return p[1] * y / (p[0] * (1.0 - y));
    }
  }
  return kNaN;
}

double sample(const DistributionSpec& spec, RandomStream& rng) {
  if (spec.family() == Family::NoncentralFisher) {
    // (noncentral chi-square(d1, nc) / d1) / (chi-square(d2) / d2), with the
    // noncentral chi-square drawn as a Poisson(nc / 2) mixture of central ones.
    const double d1 = spec.param(0);
    const double d2 = spec.param(1);
    const std::size_t j = poisson_inverse(0.5 * spec.param(2), rng.uniform());
    const double numerator = 2.0 * boost::math::gamma_p_inv(0.5 * d1 + static_cast<double>(j),
                                                            rng.uniform());
    const double denominator = 2.0 * boost::math::gamma_p_inv(0.5 * d2, rng.uniform());
    return (numerator / d1) / (denominator / d2);
  }
  return quantile(spec, rng.uniform());
}

double log_likelihood(const DistributionSpec& spec, std::span<const double> data) {
  double total = 0.0;
  for (const double x : data) {
    const double lp = log_pdf(spec, x);
    if (lp == -kInf || std::isnan(lp)) return -kInf;
    total += lp;
  }
  return total;
}

std::optional<double> mean(const DistributionSpec& spec) {
  const auto p = spec.params();
  switch (spec.family()) {
    case Family::Exponential: return 1.0 / p[0];
    case Family::LogNormal: return std::exp(p[0] + 0.5 * p[1] * p[1]);
    case Family::Weibull: return p[1] * std::tgamma(1.0 + 1.0 / p[0]);
    case Family::Gamma: return p[0] / p[1];
    case Family::ChiSquare: return p[0];
    case Family::Fisher:
      if (p[1] <= 2.0) return std::nullopt;
      return p[1] / (p[1] - 2.0);
    case Family::NoncentralFisher:
      if (p[1] <= 2.0) return std::nullopt;
      return p[1] * (p[0] + p[2]) / (p[0] * (p[1] - 2.0));
  }
  return std::nullopt;
}

}  // namespace cyberbond
