#include "cli/commands.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "chaplygin/brackets.hpp"
#include "chaplygin/verify.hpp"
#include "cli/trajectory_io.hpp"

namespace chaplygin::cli {

namespace {

// "-" means the given stream; anything else is a file path.
bool emit(const std::string& target, const std::string& text,
          std::ostream& out, std::ostream& err) {
  if (target == "-") {
    out << text;
    return true;
  }
  std::ofstream file(target, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << target << "' for writing\n";
    return false;
  }
  file << text;
  return static_cast<bool>(file);
}

}  // namespace

Trajectory simulate(const RunConfig& config) {
  const SphereParams& p = config.params;
  const IntegrationOptions& o = config.integration;
  switch (config.model) {
    case ModelKind::reduced:
      return dynamics::integrate(dynamics::reduced_system(p),
                                 to_vector(config.initial_state()), o);
    case ModelKind::rescaled:
      return dynamics::integrate_rescaled(p, config.initial_state(), o.dt,
                                          o.steps, o);
    case ModelKind::full: {
      const FullState start{config.initial_rotation(), config.x, config.y, config.K};
      return dynamics::integrate(dynamics::full_system(p),
                                 dynamics::to_vector(start), o);
    }
    case ModelKind::multiplier: {
      const FullState start{config.initial_rotation(), config.x, config.y, config.K};
      return dynamics::integrate(
          dynamics::multiplier_system(p),
          dynamics::to_vector(dynamics::consistent_multiplier_state(p, start)), o);
    }
  }
  throw std::logic_error("simulate: unknown model");
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Trajectory traj;
  try {
    traj = simulate(config);
  } catch (const std::exception& e) {  // IntegrationError included
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  std::ostringstream text;
  write_trajectory(text, traj);
  return emit(config.output, text.str(), out, err) ? kSuccess : kRuntimeFailure;
}

int cmd_verify(const RunConfig& config, const std::string& which,
               std::ostream& out, std::ostream& err) {
  verify::VerificationReport report;
  if (which == "all") {
    report = verify::run_all(config.params, config.verify);
  } else if (auto suite = verify::parse_suite(which)) {
    report = verify::run(config.params, config.verify, {*suite});
  } else {
    err << "error: unknown verification '" << which << "'\n";
    return kConfigError;
  }
  std::ostringstream text;
  verify::write_report(text, report);
  if (!emit(config.report, text.str(), out, err)) return kRuntimeFailure;
  for (const verify::CheckResult& c : report.checks) {
    if (!c.passed && !c.note.empty()) err << c.name << ": " << c.note << '\n';
  }
  return report.all_passed() ? kSuccess : kVerificationFailed;
}

int cmd_bracket_table(const RunConfig& config, const ReducedState& state,
                      std::ostream& out, std::ostream& err) {
  if (!state.K.allFinite() || !state.gamma.allFinite() ||
      std::abs(state.gamma.norm() - 1.0) > 1e-10) {
    err << "error: state must be finite with a unit gamma\n";
    return kConfigError;
  }
  static const std::array<const char*, 6> labels{"K1", "K2", "K3", "g1", "g2", "g3"};
  std::ostringstream text;
  text << std::setprecision(17);
  for (BracketVariant v : {BracketVariant::standard, BracketVariant::affine,
                           BracketVariant::scaled}) {
    const Mat6 m = BracketTable::of(v, config.params).coefficients(state);
    text << to_string(v) << '\n' << std::setw(4) << "";
    for (const char* l : labels) text << std::setw(26) << l;
    text << '\n';
    for (int i = 0; i < 6; ++i) {
      text << std::setw(4) << labels[static_cast<std::size_t>(i)];
      for (int j = 0; j < 6; ++j) {
        // Print exact zeros without a sign.
        const double value = m(i, j) == 0.0 ? 0.0 : m(i, j);
        text << std::setw(26) << value;
      }
      text << '\n';
    }
    text << '\n';
  }
  out << text.str();
  return kSuccess;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaplygin rolling sphere: simulation and bracket verification"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key = value config file");
    sub->add_option("-s,--set", overrides, "override, key=value (repeatable)");
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "integrate a trajectory");
  add_common(simulate_cmd);
  std::optional<std::string> output;
  simulate_cmd->add_option("-o,--output", output, "trajectory file, - for stdout");

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  add_common(verify_cmd);
  std::string which = "all";
  verify_cmd->add_option("which", which,
                         "all|jacobi|casimir|nonintegrability|alpha|commute|measure|consistency");
  std::optional<std::string> report;
  verify_cmd->add_option("-r,--report", report, "report file, - for stdout");

  auto* table_cmd = app.add_subcommand("bracket-table", "print coefficient tables");
  add_common(table_cmd);
  std::optional<std::vector<double>> k_arg;
  std::optional<std::vector<double>> gamma_arg;
  table_cmd->add_option("--K", k_arg, "K1 K2 K3")->expected(3);
  table_cmd->add_option("--gamma", gamma_arg, "g1 g2 g3 (not normalised)")->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code == 0 ? kSuccess : kConfigError;
  }

  if (output) overrides.push_back("output=" + *output);
  if (report) overrides.push_back("report=" + *report);

  RunConfig config;
  try {
    config = load_config(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (simulate_cmd->parsed()) return cmd_simulate(config, out, err);
  if (verify_cmd->parsed()) return cmd_verify(config, which, out, err);

  ReducedState state = config.initial_state();
  if (k_arg) state.K = Vec3((*k_arg)[0], (*k_arg)[1], (*k_arg)[2]);
  if (gamma_arg) state.gamma = Vec3((*gamma_arg)[0], (*gamma_arg)[1], (*gamma_arg)[2]);
  return cmd_bracket_table(config, state, out, err);
}

}  // namespace chaplygin::cli
