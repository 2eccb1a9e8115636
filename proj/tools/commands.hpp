#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "odeclass/kernel.hpp"

namespace odeclass::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kCheckFailed = 2, kNumerical = 3 };

struct RunConfig {
  SystemParams params{3.0, 2.0, 0.0, 0.0};
  /// Empty selects the command's default forcing.
  std::string forcing;
  double horizon = 20.0;
  double tol = 1e-10;
  double hmax = 0.01;
  std::string theta_grid = "11x11";
  double rho = 1.2;
  int windows = 4;
  std::string out;
  bool strict = false;
  std::uint64_t seed = 0;
  bool seeded = false;
  /// Random cases in a seeded verify run.
  int cases = 5;
  /// Every n-th grid node in sweeps.
  std::size_t stride = 10;
  int theta_nodes = 33;
  bool color = false;
  /// Set when --horizon was given; demo-chirp otherwise uses 10.
  bool horizon_explicit = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Each command writes its human-readable report to `report` and returns
// an ExitCode. Library exceptions propagate; `run_command` maps them.
int cmd_simulate(const RunConfig& cfg, std::ostream& report);
int cmd_verify(const RunConfig& cfg, std::ostream& report);
int cmd_classify(const RunConfig& cfg, std::ostream& report);
int cmd_sweep_theta(const RunConfig& cfg, std::ostream& report);
int cmd_demo_chirp(const RunConfig& cfg, std::ostream& report);

/// Dispatches by subcommand name and maps exceptions to exit codes,
/// printing the diagnostic to `err`.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& report, std::ostream& err);

}  // namespace odeclass::cli
