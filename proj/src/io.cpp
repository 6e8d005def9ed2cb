#include "cyberbond/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "cyberbond/errors.hpp"

namespace cyberbond {
namespace {

Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const DistributionSpec& spec) {
  Json params = Json::object();
  const auto names = param_names(spec.family());
  for (std::size_t i = 0; i < spec.size(); ++i) params[std::string(names[i])] = spec.param(i);
  return {{"family", std::string(family_name(spec.family()))}, {"params", params}};
}

DistributionSpec distribution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("distribution needs a string 'family'");
  }
  Family family{};
  try {
    family = parse_family(j["family"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  const auto names = param_names(family);
  const Json params = j.value("params", Json::object());
  if (!params.is_object()) throw ConfigError("distribution 'params' must be an object");
  std::set<std::string> known;
  std::vector<double> values;
  for (const auto name : names) {
    const std::string key(name);
    known.insert(key);
    if (!params.contains(key) || !params[key].is_number()) {
      throw ConfigError("distribution '" + std::string(family_name(family)) +
                        "' is missing numeric parameter '" + key + "'");
    }
    values.push_back(params[key].get<double>());
  }
  for (const auto& [key, _] : params.items()) {
    if (!known.count(key)) throw ConfigError("unknown distribution parameter '" + key + "'");
  }
  try {
    return DistributionSpec::from_params(family, values);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Json to_json(const FitResult& fit) {
  Json se = Json::object();
  const auto names = param_names(fit.spec.family());
  for (std::size_t i = 0; i < fit.standard_errors.size() && i < names.size(); ++i) {
    se[std::string(names[i])] = number(fit.standard_errors[i]);
  }
  Json j = to_json(fit.spec);
  j["standard_errors"] = se;
  j["log_likelihood"] = number(fit.log_likelihood);
  j["n_obs"] = fit.n_obs;
  j["converged"] = fit.converged;
  j["optimizer"] = std::string(optimizer_name(fit.optimizer));
  if (!fit.message.empty()) j["message"] = fit.message;
  return j;
}

Json to_json(const GofReport& report) {
  Json j = {{"test", std::string(gof_test_name(report.test))},
            {"statistic", number(report.statistic)},
            {"p_value", number(report.p_value)},
            {"n_obs", report.n_obs}};
  if (report.df) j["df"] = *report.df;
  if (report.bins) j["bins"] = *report.bins;
  if (report.low_expected_count) j["low_expected_count"] = true;
  return j;
}

Json to_json(const PricingResult& result) {
  return {{"price", number(result.price)},
          {"mc_std_error", number(result.mc_std_error)},
          {"n_paths", result.n_paths}};
}

Json to_json(const Greeks& g) {
  return {{"dS_dlambda", number(g.dS_dlambda)},
          {"dS_dmu", number(g.dS_dmu)},
          {"dS_dsigma", number(g.dS_dsigma)},
          {"dS_dr", number(g.dS_dr)}};
}

Json to_json(const CouponQuote& quote) {
  Json inputs = Json::object();
  for (const auto& [k, v] : quote.inputs) inputs[k] = number(v);
  return {{"method", std::string(coupon_method_name(quote.method))},
          {"coupon_rate_pct", number(quote.coupon_rate_pct)},
          {"coupon_value", number(quote.coupon_value)},
          {"inputs", inputs}};
}

Json to_json(const ConfidenceBox& box) {
  Json params = Json::array();
  for (std::size_t i = 0; i < box.size(); ++i) {
    params.push_back({{"name", box.names[i]},
                      {"estimate", box.estimates[i]},
                      {"standard_error", box.standard_errors[i]},
                      {"lower", box.bounds[i].lower},
                      {"upper", box.bounds[i].upper}});
  }
  return {{"level", box.level}, {"parameters", params}};
}

void write_csv_header(std::ostream& out, const OutputHeader& header) {
  out << "# cyberbond " << header.command << '\n'
      << "# config_hash: fnv1a64:" << header.config_hash << '\n'
      << "# seed: " << header.seed << '\n';
}

Json with_header(const OutputHeader& header, const Json& body) {
  Json j = {{"header",
             {{"tool", "cyberbond"},
              {"command", header.command},
              {"config_hash", "fnv1a64:" + header.config_hash},
              {"seed", header.seed}}}};
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

}  // namespace cyberbond
