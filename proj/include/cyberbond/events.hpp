#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cyberbond {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD. Returns nullopt on anything else, including invalid
/// calendar dates such as 2019-02-30.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

/// Whole calendar days from `from` to `to`.
std::int64_t days_between(Date from, Date to);

struct CyberEvent {
  Date date;
  std::optional<double> loss_usd;  // strictly positive when present
  std::string category;            // empty when untagged
};

class EventSeries {
 public:
  EventSeries() = default;
  /// Sorts by date (stable, so same-day rows keep their input order).
  explicit EventSeries(std::vector<CyberEvent> events);

  const std::vector<CyberEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  auto begin() const noexcept { return events_.begin(); }
  auto end() const noexcept { return events_.end(); }

 private:
  std::vector<CyberEvent> events_;
};

/// Positive, pairwise distinct inter-event gaps in days.
struct IntervalSeries {
  std::vector<std::int64_t> intervals;

  std::vector<double> as_doubles() const;
};

struct LossSeries {
  std::vector<double> losses;
};

/// CSV with header `date,loss_usd,category`. Blank loss means undisclosed.
/// Throws DataError (file missing, empty) or ParseError (row-indexed; row 1 is
/// the header).
EventSeries load_events(const std::filesystem::path& path);
EventSeries parse_events_csv(std::istream& in);

/// Unique calendar dates, consecutive differences, then first-occurrence
/// de-duplication of the differences. Throws DataError with fewer than two
/// unique dates.
IntervalSeries prepare_intervals(const EventSeries& events);

/// Disclosed losses in date order.
LossSeries extract_losses(const EventSeries& events);

EventSeries filter_category(const EventSeries& events, std::string_view category);

}  // namespace cyberbond
