#include "cli/trajectory_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace chaplygin::cli {

std::size_t TrajectoryTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<std::string> trajectory_columns(ModelKind model) {
  std::vector<std::string> cols{"t"};
  if (model == ModelKind::rescaled) cols.push_back("tau");
  for (const char* c : {"K1", "K2", "K3", "g1", "g2", "g3", "H", "J", "Kgamma", "gnorm"}) {
    cols.emplace_back(c);
  }
  if (model == ModelKind::full || model == ModelKind::multiplier) {
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) cols.push_back("R" + std::to_string(i) + std::to_string(j));
    cols.emplace_back("x");
    cols.emplace_back("y");
    cols.emplace_back("orth");
  }
  if (model == ModelKind::multiplier) {
    cols.emplace_back("res_x");
    cols.emplace_back("res_y");
  }
  return cols;
}

std::vector<double> trajectory_row(const Trajectory& traj, const Sample& s) {
  std::vector<double> row{s.t};
  if (traj.model == ModelKind::rescaled) row.push_back(s.tau);

  ReducedState reduced;
  Mat3 g = Mat3::Identity();
  double x = 0.0;
  double y = 0.0;
  Eigen::Vector2d residual = Eigen::Vector2d::Zero();
  switch (traj.model) {
    case ModelKind::reduced:
    case ModelKind::rescaled:
      reduced = from_vector(s.state.head<6>());
      break;
    case ModelKind::full: {
      const FullState f = dynamics::full_state_from_vector(s.state);
      reduced = dynamics::project(f);
      g = f.g;
      x = f.x;
      y = f.y;
      break;
    }
    case ModelKind::multiplier: {
      const MultiplierState m = dynamics::multiplier_state_from_vector(s.state);
      reduced = dynamics::project(traj.params, m);
      g = m.g;
      x = m.x;
      y = m.y;
      residual = dynamics::constraint_residuals(traj.params, m);
      break;
    }
  }
  for (int i = 0; i < 3; ++i) row.push_back(reduced.K(i));
  for (int i = 0; i < 3; ++i) row.push_back(reduced.gamma(i));
  row.push_back(s.integrals.H);
  row.push_back(s.integrals.J);
  row.push_back(s.integrals.Kgamma);
  row.push_back(s.integrals.gnorm);
  if (traj.model == ModelKind::full || traj.model == ModelKind::multiplier) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row.push_back(g(i, j));
    row.push_back(x);
    row.push_back(y);
    row.push_back(so3::orthonormality_defect(g));
  }
  if (traj.model == ModelKind::multiplier) {
    row.push_back(residual(0));
    row.push_back(residual(1));
  }
  return row;
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const std::vector<std::string> cols = trajectory_columns(traj.model);
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t i = 0; i < cols.size(); ++i) buf << (i ? "," : "") << cols[i];
  buf << '\n';
  for (const Sample& s : traj.samples) {
    const std::vector<double> row = trajectory_row(traj, s);
    for (std::size_t i = 0; i < row.size(); ++i) buf << (i ? "," : "") << row[i];
    buf << '\n';
  }
  out << buf.str();
}

TrajectoryTable read_trajectory(std::istream& in) {
  TrajectoryTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file");
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) table.columns.push_back(name);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw std::runtime_error("malformed number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("row width does not match header");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace chaplygin::cli
