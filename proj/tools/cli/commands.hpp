#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "chaplygin/dynamics.hpp"
#include "cli/config.hpp"

namespace chaplygin::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kRuntimeFailure = 3,
};

/// Runs the configured model from the configured initial state.
Trajectory simulate(const RunConfig& config);

/// Writes the trajectory to config.output ("-" is stdout).
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// which: all | jacobi | casimir | nonintegrability | alpha | commute |
/// measure | consistency.
int cmd_verify(const RunConfig& config, const std::string& which,
               std::ostream& out, std::ostream& err);

/// Prints the standard, affine and scaled coefficient tables at `state`.
int cmd_bracket_table(const RunConfig& config, const ReducedState& state,
                      std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace chaplygin::cli
