#include <cmath>
#include <limits>
#include <sstream>

#include "cyberbond/errors.hpp"
#include "cyberbond/io.hpp"
#include "doctest.h"

using namespace cyberbond;

TEST_CASE("fnv1a reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("distribution json round trip") {
  for (const auto& s : {DistributionSpec::exponential(0.0211), DistributionSpec::lognormal(14.9179, 2.3434),
                        DistributionSpec::gamma(0.598, 0.0091),
                        DistributionSpec::noncentral_fisher(0.66, 2.0643, 10.3834)}) {
    const auto back = distribution_from_json(Json::parse(to_json(s).dump()));
    CHECK(back.family() == s.family());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.param(i) == s.param(i));
  }
}

TEST_CASE("distribution json is validated") {
  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"family": "cauchy", "params": {}})")),
                  ConfigError);
  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"family": "lognormal", "params": {"mu": 1}})")),
                  ConfigError);
  const auto extra = Json::parse(R"({"family": "exponential", "params": {"rate": 1, "shape": 2}})");
  CHECK_THROWS_AS(distribution_from_json(extra), ConfigError);
  CHECK_THROWS_AS(distribution_from_json(Json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"family": "exponential", "params": {"rate": -1}})")),
                  ConfigError);
}

TEST_CASE("double formatting round-trips") {
  for (const double v : {0.1, 18797813.26, 1e-300, 2.0 / 3.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("output headers") {
  const OutputHeader h{"price", "0123456789abcdef", 2019};
  std::ostringstream csv;
  write_csv_header(csv, h);
  CHECK(csv.str() == "# cyberbond price\n# config_hash: fnv1a64:0123456789abcdef\n# seed: 2019\n");
  const auto j = with_header(h, Json{{"price", 1.0}});
  CHECK(j.begin().key() == "header");
  CHECK(j["header"]["config_hash"] == "fnv1a64:0123456789abcdef");
  CHECK(j["header"]["seed"] == 2019);
  CHECK(j["price"] == 1.0);
}

TEST_CASE("result serialization") {
  const auto j = to_json(PricingResult{1015.5, 2.5, 5000});
  CHECK(j["price"] == 1015.5);
  CHECK(j["n_paths"] == 5000);
  GofReport r;
  r.test = GofTest::ChiSquare;
  r.df = 8;
  CHECK(to_json(r)["df"] == 8);
  CHECK(to_json(r)["test"] == "chi_square");
  const auto box = ConfidenceBox::from_estimates({"rate"}, {0.156}, {0.015}, 0.99);
  CHECK(to_json(box)["parameters"][0]["name"] == "rate");
}
