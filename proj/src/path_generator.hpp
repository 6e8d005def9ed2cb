#pragma once

#include <cmath>
#include <cstddef>

#include "cyberbond/errors.hpp"
#include "cyberbond/lossmodel.hpp"
#include "cyberbond/random.hpp"

namespace cyberbond::detail {

inline constexpr std::size_t kMaxEventsPerPath = 50'000'000;

/// Calls sink(day, amount) for each arrival in (0, horizon], in time order.
template <typename Sink>
void for_each_event(const SimulationConfig& config, std::size_t path_index, Sink&& sink) {
  auto gaps = RandomStream::for_path(config.master_seed, path_index, StreamRole::Frequency);
  auto sizes = RandomStream::for_path(config.master_seed, path_index, StreamRole::Severity);
  const double horizon = static_cast<double>(config.horizon_days);
  double day = 0.0;
  for (std::size_t count = 0;; ++count) {
    if (count >= kMaxEventsPerPath) {
      throw NumericalError("path exceeded the event cap; frequency distribution too dense");
    }
    const double next = day + sample(config.frequency, gaps);
    if (!(next <= horizon)) break;  // also stops on NaN
    // A zero gap (underflow of a shape < 1 draw) would break strict ordering.
    day = next > day ? next : std::nextafter(day, horizon + 1.0);
    sink(day, sample(config.severity, sizes));
  }
}

}  // namespace cyberbond::detail
