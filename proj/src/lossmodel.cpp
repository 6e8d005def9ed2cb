#include "cyberbond/lossmodel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>

#include "cyberbond/errors.hpp"
#include "cyberbond/kernels.hpp"
#include "path_generator.hpp"

namespace cyberbond {

void SimulationConfig::validate() const {
  if (horizon_days < 1) throw InvalidArgument("horizon_days must be >= 1");
  if (n_paths < 1) throw InvalidArgument("n_paths must be >= 1");
}

LossPath simulate_path(const SimulationConfig& config, std::size_t path_index) {
  config.validate();
  LossPath path;
  detail::for_each_event(config, path_index, [&](double day, double amount) {
    path.events.push_back({day, amount});
  });
  return path;
}

std::vector<LossPath> simulate_paths(const SimulationConfig& config, Execution exec) {
  config.validate();
  std::vector<LossPath> paths(config.n_paths);
  const auto n = static_cast<std::int64_t>(config.n_paths);
  if (exec == Execution::Parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        paths[static_cast<std::size_t>(i)] = simulate_path(config, static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(cyberbond_simulate_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      paths[static_cast<std::size_t>(i)] = simulate_path(config, static_cast<std::size_t>(i));
    }
  }
  return paths;
}

double cumulative_loss(const LossPath& path, double day) {
  double sum = 0.0;
  for (const auto& e : path.events) {
    if (e.day > day) break;
    sum += e.amount;
  }
  return sum;
}

double total_loss(const LossPath& path) {
  double sum = 0.0;
  for (const auto& e : path.events) sum += e.amount;
  return sum;
}

std::vector<double> empirical_quantiles(std::span<const double> values,
                                        std::span<const double> probs) {
  if (values.empty()) throw InvalidArgument("quantiles of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  const double last = static_cast<double>(sorted.size() - 1);
  for (double p : probs) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile probability must lie in (0, 1)");
    const double h = last * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    out.push_back(sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
  }
  return out;
}

std::vector<double> total_loss_quantiles(std::span<const LossPath> paths,
                                         std::span<const double> probs) {
  std::vector<double> totals;
  totals.reserve(paths.size());
  for (const auto& p : paths) totals.push_back(total_loss(p));
  return empirical_quantiles(totals, probs);
}

void write_paths_csv(std::ostream& out, std::span<const LossPath> paths, std::size_t first_index) {
  out << "path_index,day,amount\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (const auto& e : paths[i].events) {
      out << first_index + i << ',' << e.day << ',' << e.amount << '\n';
    }
  }
}

ScenarioSet::ScenarioSet(std::vector<std::int64_t> days, std::size_t n_paths,
                         std::vector<double> values)
    : days_(std::move(days)), n_paths_(n_paths), values_(std::move(values)) {
  if (values_.size() != n_paths_ * days_.size()) {
    throw InvalidArgument("scenario matrix size does not match paths x days");
  }
}

std::vector<double> ScenarioSet::final_losses() const {
  std::vector<double> out(n_paths_);
  if (days_.empty()) return out;
  for (std::size_t p = 0; p < n_paths_; ++p) out[p] = at(p, days_.size() - 1);
  return out;
}

ScenarioSet simulate_scenarios(const SimulationConfig& config, std::span<const std::int64_t> days,
                               Execution exec) {
  config.validate();
  if (days.empty()) throw InvalidArgument("scenario observation days must not be empty");
  for (std::size_t j = 0; j < days.size(); ++j) {
    if (days[j] < 0 || days[j] > config.horizon_days || (j > 0 && days[j] <= days[j - 1])) {
      throw InvalidArgument("observation days must be strictly increasing within the horizon");
    }
  }
  std::vector<double> values(config.n_paths * days.size());
  if (exec == Execution::Parallel) {
    kernels::omp::payment_losses(config, days, values);
  } else {
    kernels::serial::payment_losses(config, days, values);
  }
  return ScenarioSet({days.begin(), days.end()}, config.n_paths, std::move(values));
}

}  // namespace cyberbond
