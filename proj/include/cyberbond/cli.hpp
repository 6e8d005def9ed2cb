#pragma once

// Command-line driver. Every command is a pure function of the config
// document (after flag overrides), the input files it names, and the seed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cyberbond/bond.hpp"
#include "cyberbond/coupon.hpp"
#include "cyberbond/fitting.hpp"
#include "cyberbond/io.hpp"

namespace cyberbond::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kNumerical = 4 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::size_t> paths;
  std::optional<std::string> category;
  std::optional<std::string> method;
};

struct TriggerGrid {
  std::size_t points = 20;
  double coupon_low = 0.10;
  double coupon_high = 0.90;
  double notional_low = 0.10;
  double notional_high = 0.99;
};

/// Multiplies one model parameter, e.g. the frequency rate by 1.25.
struct Stress {
  std::string label;
  bool severity = false;
  std::size_t param = 0;
  double factor = 1.0;
};

struct RunConfig {
  Json document;  // effective config, overrides applied
  std::string hash;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;

  std::optional<std::filesystem::path> events_csv;
  std::optional<std::string> category;
  std::vector<Family> interval_families;
  std::vector<Family> loss_families;
  Optimizer optimizer = Optimizer::Auto;

  std::optional<SimulationConfig> model;
  std::optional<BondTerms> bond;
  TriggerGrid grid;

  CouponMethod coupon_method = CouponMethod::ProbabilityOfLoss;
  double reference_rate_pct = 2.05;
  double pnl_pct = 100.0;
  double constant_pct = 0.0;
  double multiplier = 1.0;
  std::optional<double> pl_pct;  // fixed PL instead of the simulated grid average
  std::vector<Stress> stresses;

  std::optional<GreekBumps> bumps;
  std::optional<ConfidenceBox> box;  // around the model parameters
  bool greeks_corners = true;
  std::optional<PrudentMode> prudent;
};

/// Reads and validates a config file. Relative input paths are resolved
/// against the config file's directory. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
RunConfig parse_config(Json document, const std::filesystem::path& base_dir,
                       const Overrides& overrides = {});

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_price(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_coupon(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_greeks(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: parses argv, runs the command, maps exceptions to exit
/// codes (2 config, 3 data, 4 numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cyberbond::cli
