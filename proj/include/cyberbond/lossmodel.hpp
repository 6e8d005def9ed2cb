#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "cyberbond/distributions.hpp"

namespace cyberbond {

enum class Execution { Serial, Parallel };

struct SimulationConfig {
  std::int64_t horizon_days = 0;
  std::size_t n_paths = 0;
  std::uint64_t master_seed = 0;
  DistributionSpec frequency;  // inter-arrival gap in days
  DistributionSpec severity;   // loss per event in USD

  /// Throws InvalidArgument unless horizon_days >= 1 and n_paths >= 1.
  void validate() const;
};

struct LossEvent {
  double day = 0.0;
  double amount = 0.0;
};

/// One compound-loss trajectory; days strictly increasing, all <= horizon.
struct LossPath {
  std::vector<LossEvent> events;
};

/// Deterministic in (master_seed, path_index): gaps come from the frequency
/// stream and amounts from the severity stream of that path, starting at day 0.
LossPath simulate_path(const SimulationConfig& config, std::size_t path_index);

std::vector<LossPath> simulate_paths(const SimulationConfig& config,
                                     Execution exec = Execution::Parallel);

/// Sum of amounts with event day <= `day`.
double cumulative_loss(const LossPath& path, double day);
double total_loss(const LossPath& path);

/// Linear-interpolation (R type 7) quantiles; probs must lie in (0, 1).
std::vector<double> empirical_quantiles(std::span<const double> values,
                                        std::span<const double> probs);

std::vector<double> total_loss_quantiles(std::span<const LossPath> paths,
                                         std::span<const double> probs);

/// CSV `path_index,day,amount`, one row per event.
void write_paths_csv(std::ostream& out, std::span<const LossPath> paths,
                     std::size_t first_index = 0);

/// Cumulative loss of every path at a fixed set of observation days
/// (row-major: path x day). This is all the pricing code needs from a path.
class ScenarioSet {
 public:
  ScenarioSet(std::vector<std::int64_t> days, std::size_t n_paths, std::vector<double> values);

  const std::vector<std::int64_t>& days() const noexcept { return days_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_days() const noexcept { return days_.size(); }

  double at(std::size_t path, std::size_t day_index) const {
    return values_[path * days_.size() + day_index];
  }
  std::span<const double> row(std::size_t path) const {
    return {values_.data() + path * days_.size(), days_.size()};
  }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Loss at the last observation day for every path.
  std::vector<double> final_losses() const;

 private:
  std::vector<std::int64_t> days_;
  std::size_t n_paths_;
  std::vector<double> values_;
};

/// Simulates config.n_paths paths and records their cumulative losses on
/// `days` (strictly increasing, each in [0, horizon]). Bitwise identical for
/// both execution modes and any thread count.
ScenarioSet simulate_scenarios(const SimulationConfig& config, std::span<const std::int64_t> days,
                               Execution exec = Execution::Parallel);

}  // namespace cyberbond
