#pragma once

// JSON serialization of the result types and the header block every output
// file starts with.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cyberbond/bond.hpp"
#include "cyberbond/coupon.hpp"
#include "cyberbond/distributions.hpp"
#include "cyberbond/fitting.hpp"
#include "cyberbond/gof.hpp"

namespace cyberbond {

using Json = nlohmann::ordered_json;

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// {family, params: {name: value}}.
Json to_json(const DistributionSpec& spec);
/// Inverse of to_json; every parameter of the family must be named. Throws
/// ConfigError on unknown families, missing or extra parameters.
DistributionSpec distribution_from_json(const Json& j);

Json to_json(const FitResult& fit);
Json to_json(const GofReport& report);
Json to_json(const PricingResult& result);
Json to_json(const Greeks& greeks);
Json to_json(const CouponQuote& quote);
Json to_json(const ConfidenceBox& box);

/// Doubles are printed with 17 significant digits; infinity as "inf".
std::string format_double(double v);

/// Identification written at the top of each output file.
struct OutputHeader {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// `# key: value` lines for CSV files.
void write_csv_header(std::ostream& out, const OutputHeader& header);
/// JSON document {"header": {...}, <body fields>}.
Json with_header(const OutputHeader& header, const Json& body);

}  // namespace cyberbond
