#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "chaplygin/dynamics.hpp"

namespace chaplygin::cli {

/// Parsed delimited-text trajectory: one header row, numeric rows.
struct TrajectoryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

std::vector<std::string> trajectory_columns(ModelKind model);

/// Row values for one sample, in the order of trajectory_columns(model).
std::vector<double> trajectory_row(const Trajectory& traj, const Sample& s);

/// Comma-separated, LF line endings, 17 significant digits.
void write_trajectory(std::ostream& out, const Trajectory& traj);

TrajectoryTable read_trajectory(std::istream& in);

}  // namespace chaplygin::cli
