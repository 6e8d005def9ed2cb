#include "cyberbond/events.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "cyberbond/errors.hpp"

namespace cyberbond {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record. Supports double-quoted fields with "" escapes; the
// event schema never needs embedded newlines.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_iso_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::int64_t days_between(Date from, Date to) {
  return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

EventSeries::EventSeries(std::vector<CyberEvent> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const CyberEvent& a, const CyberEvent& b) { return a.date < b.date; });
}

std::vector<double> IntervalSeries::as_doubles() const {
  return {intervals.begin(), intervals.end()};
}

EventSeries parse_events_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  std::vector<CyberEvent> events;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (!have_header) {
      auto header = split_csv(line);
      for (auto& h : header) h = std::string(trim(h));
      if (header.size() < 2 || header[0] != "date" || header[1] != "loss_usd") {
        throw ParseError(row, "expected header 'date,loss_usd,category'");
      }
      have_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.empty() || fields.size() > 3) {
      throw ParseError(row, "expected 1 to 3 fields, got " + std::to_string(fields.size()));
    }
    const auto date = parse_iso_date(fields[0]);
    if (!date) throw ParseError(row, "malformed date '" + fields[0] + "'");

    CyberEvent event{*date, std::nullopt, {}};
    if (fields.size() > 1) {
      const auto loss_text = trim(fields[1]);
      if (!loss_text.empty()) {
        double loss = 0.0;
        const auto [ptr, ec] =
            std::from_chars(loss_text.data(), loss_text.data() + loss_text.size(), loss);
        if (ec != std::errc{} || ptr != loss_text.data() + loss_text.size()) {
          throw ParseError(row, "malformed loss '" + std::string(loss_text) + "'");
        }
        if (!std::isfinite(loss) || loss <= 0.0) {
          throw ParseError(row, "loss must be strictly positive, got '" +
                                    std::string(loss_text) + "'");
        }
        event.loss_usd = loss;
      }
    }
    if (fields.size() > 2) event.category = std::string(trim(fields[2]));
    events.push_back(std::move(event));
  }
  if (!have_header) throw DataError("empty events file");
  if (events.empty()) throw DataError("events file has a header but no rows");
  return EventSeries(std::move(events));
}

EventSeries load_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file '" + path.string() + "'");
  return parse_events_csv(in);
}

IntervalSeries prepare_intervals(const EventSeries& events) {
  std::vector<Date> dates;
  dates.reserve(events.size());
  for (const auto& e : events) {
    if (dates.empty() || dates.back() != e.date) dates.push_back(e.date);
  }
  if (dates.size() < 2) {
    throw DataError("need at least 2 unique event dates to form intervals, got " +
                    std::to_string(dates.size()));
  }
  IntervalSeries out;
  std::unordered_set<std::int64_t> seen;
  for (std::size_t i = 1; i < dates.size(); ++i) {
    const auto gap = days_between(dates[i - 1], dates[i]);
    if (seen.insert(gap).second) out.intervals.push_back(gap);
  }
  return out;
}

LossSeries extract_losses(const EventSeries& events) {
  LossSeries out;
  for (const auto& e : events) {
    if (e.loss_usd && *e.loss_usd > 0.0) out.losses.push_back(*e.loss_usd);
  }
  return out;
}

EventSeries filter_category(const EventSeries& events, std::string_view category) {
  std::vector<CyberEvent> kept;
  for (const auto& e : events) {
    if (e.category == category) kept.push_back(e);
  }
  return EventSeries(std::move(kept));
}

}  // namespace cyberbond
