#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ca/model.hpp"

namespace ca {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitInput = 3,
  kExitNoConvergence = 4,
  kExitProtocol = 5,
};

/// Capacity sweep over one carrier: start, start+step, ... up to stop.
struct SweepSpec {
  CarrierId carrier;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  /// Throws ValidationError unless step > 0, start <= stop and start > 0.
  void validate() const;
  std::vector<double> values() const;
};

/// Parses "<id>=<start>:<stop>:<step>".
SweepSpec parse_sweep_spec(std::string_view text);

/// Parses "<id>=<value>".
std::pair<CarrierId, double> parse_capacity_override(std::string_view text);

struct RunConfig {
  std::optional<std::filesystem::path> scenario_path;
  /// Only "section5" is known.
  std::optional<std::string> preset;
  std::vector<std::pair<CarrierId, double>> capacity_overrides;
  std::optional<SweepSpec> sweep;
  std::filesystem::path out_dir = ".";
  std::optional<double> delta;
  std::optional<double> l1;
  std::optional<double> l2;
  std::optional<int> max_iters;
  int verbosity = 0;

  /// Throws ValidationError on a missing or ambiguous scenario source.
  void validate() const;
};

/// Loads the file or builds the preset, then applies capacity overrides.
Scenario resolve_scenario(const RunConfig& config);

/// Default SolverParams with the config's overrides applied.
SolverParams resolve_params(const RunConfig& config);

/// Exit status for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// Single allocation; writes allocations.csv, aggregates.csv, prices.csv and
/// trace_<carrier>_{offered,allocation}.csv into out_dir. Errors are
/// reported on `err` and mapped to an exit status.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Capacity sweep; writes sweep_prices.csv and sweep_aggregates.csv. A
/// failed point is recorded in the status column and makes the exit status
/// nonzero, but the remaining points are still written.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ca
