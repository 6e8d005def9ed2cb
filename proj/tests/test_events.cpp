#include <sstream>

#include "cyberbond/errors.hpp"
#include "cyberbond/events.hpp"
#include "doctest.h"

using namespace cyberbond;

namespace {

EventSeries parse(const std::string& text) {
  std::istringstream in(text);
  return parse_events_csv(in);
}

EventSeries on_days(std::initializer_list<int> january_days) {
  std::string csv = "date,loss_usd,category\n";
  for (int d : january_days) csv += "2019-01-" + std::string(d < 10 ? "0" : "") + std::to_string(d) + ",,\n";
  return parse(csv);
}

}  // namespace

TEST_CASE("ISO dates") {
  CHECK(parse_iso_date("2019-02-28").has_value());
  CHECK_FALSE(parse_iso_date("2019-02-30").has_value());
  CHECK_FALSE(parse_iso_date("2019-2-3").has_value());
  CHECK_FALSE(parse_iso_date("yesterday").has_value());
  const auto a = *parse_iso_date("2016-02-28");
  const auto b = *parse_iso_date("2016-03-01");
  CHECK(days_between(a, b) == 2);
  CHECK(format_iso_date(a) == "2016-02-28");
}

TEST_CASE("well-formed rows load sorted by date") {
  const auto s = parse(
      "date,loss_usd,category\n"
      "2019-03-01,5000000,fraud\n"
      "2018-12-31,,data_breach\n"
      "2019-01-15,1.5e6,\n");
  REQUIRE(s.size() == 3);
  CHECK(format_iso_date(s.events()[0].date) == "2018-12-31");
  CHECK(format_iso_date(s.events()[1].date) == "2019-01-15");
  CHECK(format_iso_date(s.events()[2].date) == "2019-03-01");
  CHECK_FALSE(s.events()[0].loss_usd.has_value());
  CHECK(*s.events()[1].loss_usd == 1.5e6);
  CHECK(s.events()[2].category == "fraud");
}

TEST_CASE("malformed input is rejected with the row number") {
  try {
    parse("date,loss_usd,category\n2019-01-01,1,\n2019-01-02,-5,\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
  }
  try {
    parse("date,loss_usd,category\n2019-13-01,1,\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
  }
  CHECK_THROWS_AS(parse("date,loss_usd,category\n2019-01-01,0,\n"), ParseError);
  CHECK_THROWS_AS(parse("date,loss_usd,category\n2019-01-01,abc,\n"), ParseError);
  CHECK_THROWS_AS(parse("when,amount\n2019-01-01,1\n"), ParseError);
  CHECK_THROWS_AS(parse(""), DataError);
  CHECK_THROWS_AS(parse("date,loss_usd,category\n"), DataError);
  CHECK_THROWS_AS(load_events("/nonexistent/events.csv"), DataError);
}

TEST_CASE("prepare_intervals applies unique dates then unique differences") {
  // Jan 1, Jan 1, Jan 4, Jan 11, Jan 14 -> diffs 3, 7, 3 -> intervals 3, 7.
  const auto i = prepare_intervals(on_days({1, 1, 4, 11, 14}));
  CHECK(i.intervals == std::vector<std::int64_t>{3, 7});
  CHECK(prepare_intervals(on_days({1, 2})).intervals == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(prepare_intervals(on_days({5, 5, 5})), DataError);
}

TEST_CASE("duplicate dates do not change the intervals") {
  const auto base = prepare_intervals(on_days({2, 3, 9, 20, 22, 30}));
  const auto dup = prepare_intervals(on_days({2, 3, 3, 9, 20, 20, 20, 22, 30}));
  CHECK(base.intervals == dup.intervals);
  for (const auto v : base.intervals) CHECK(v > 0);
}

TEST_CASE("extract_losses keeps date order") {
  const auto s = parse(
      "date,loss_usd,category\n"
      "2019-01-05,3000000,\n"
      "2019-01-01,,\n"
      "2019-01-02,1000000,\n"
      "2019-01-03,,\n"
      "2019-01-04,,\n");
  CHECK(extract_losses(s).losses == std::vector<double>{1e6, 3e6});
  CHECK(extract_losses(on_days({1, 2})).losses.empty());
}

TEST_CASE("filter_category") {
  const auto s = parse(
      "date,loss_usd,category\n"
      "2019-01-01,,fraud\n"
      "2019-01-02,10,data_breach\n"
      "2019-01-03,20,fraud\n");
  const auto f = filter_category(s, "fraud");
  REQUIRE(f.size() == 2);
  CHECK(format_iso_date(f.events()[1].date) == "2019-01-03");
  CHECK(filter_category(s, "ransomware").empty());
}

TEST_CASE("bundled sample has the published group sizes") {
  const auto s = load_events(CYBERBOND_SAMPLE_EVENTS);
  CHECK(s.size() == 328);
  CHECK(extract_losses(s).losses.size() == 136);
  const auto breach = filter_category(s, "data_breach");
  const auto fraud = filter_category(s, "fraud");
  CHECK(breach.size() == 70);
  CHECK(extract_losses(breach).losses.size() == 12);
  CHECK(fraud.size() == 96);
  CHECK(extract_losses(fraud).losses.size() == 69);
}
