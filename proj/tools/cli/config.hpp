#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaplygin/dynamics.hpp"
#include "chaplygin/model.hpp"
#include "chaplygin/verify.hpp"

namespace chaplygin::cli {

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a CLI run needs. Defaults are the canonical parameters
/// m = 1, r = 1, I = (1, 2, 3) and the frozen verification tolerances; the
/// bundled default.cfg spells out the same values.
struct RunConfig {
  SphereParams params;
  ModelKind model = ModelKind::reduced;

  // Initial state. gamma is normalised when loaded. For full and multiplier
  // runs the attitude is exp(hat(rotation)) when a rotation is given,
  // otherwise some rotation whose third row is gamma.
  Vec3 K = Vec3(1.0, -0.5, 0.7);
  Vec3 gamma = Vec3(0.3, -0.4, 0.866).normalized();
  std::optional<Vec3> rotation;
  double x = 0.0;
  double y = 0.0;

  IntegrationOptions integration{1e-3, 10000, 1, 0, 1};

  verify::VerifyConfig verify;

  std::string output = "-";
  std::string report = "-";

  ReducedState initial_state() const { return {K, gamma}; }
  Mat3 initial_rotation() const;
  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Flat key = value text. '#' starts a comment; vectors are
/// whitespace-separated. Later assignments win.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::istream& in);
/// Parses a single "key=value" override.
std::pair<std::string, std::string> parse_override(const std::string& text);

/// Applies assignments in order on top of `base`, then validates.
RunConfig apply_values(RunConfig base, const KeyValues& values);

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides);

}  // namespace chaplygin::cli
