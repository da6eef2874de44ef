#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace chaplygin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  double v = 0.0;
  std::string rest;
  if (!(in >> v) || (in >> rest)) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::int64_t v = 0;
  std::string rest;
  if (!(in >> v) || (in >> rest)) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

Vec3 to_vec3(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  Vec3 v;
  std::string rest;
  if (!(in >> v.x() >> v.y() >> v.z()) || (in >> rest)) {
    throw ConfigError("'" + key + "' expects three numbers, got '" + text + "'");
  }
  return v;
}

ModelKind to_model(const std::string& text) {
  if (text == "reduced") return ModelKind::reduced;
  if (text == "full") return ModelKind::full;
  if (text == "multiplier") return ModelKind::multiplier;
  if (text == "rescaled") return ModelKind::rescaled;
  throw ConfigError("unknown model '" + text + "'");
}

std::vector<BracketVariant> to_variants(const std::string& text) {
  if (text == "all") {
    return {BracketVariant::standard, BracketVariant::affine,
            BracketVariant::scaled};
  }
  if (auto v = parse_variant(text)) return {*v};
  throw ConfigError("unknown bracket variant '" + text + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto number = [&t](const std::string& key, double& (*field)(RunConfig&)) {
      t[key] = [field](RunConfig& c, const std::string& k, const std::string& v) {
        field(c) = to_double(k, v);
      };
    };
    number("mass", [](RunConfig& c) -> double& { return c.params.mass; });
    number("radius", [](RunConfig& c) -> double& { return c.params.radius; });
    number("x", [](RunConfig& c) -> double& { return c.x; });
    number("y", [](RunConfig& c) -> double& { return c.y; });
    number("dt", [](RunConfig& c) -> double& { return c.integration.dt; });
    number("k_box", [](RunConfig& c) -> double& { return c.verify.samples.k_box; });
    number("commute_s", [](RunConfig& c) -> double& { return c.verify.commute_s; });
    number("commute_t", [](RunConfig& c) -> double& { return c.verify.commute_t; });
    number("commute_dt", [](RunConfig& c) -> double& { return c.verify.commute_dt; });
    number("consistency_T", [](RunConfig& c) -> double& { return c.verify.consistency_duration; });
    number("consistency_dt", [](RunConfig& c) -> double& { return c.verify.consistency_dt; });

    number("tol.jacobi", [](RunConfig& c) -> double& { return c.verify.tol.jacobi; });
    number("tol.non_jacobi_threshold", [](RunConfig& c) -> double& { return c.verify.tol.non_jacobi_threshold; });
    number("tol.generic_fraction", [](RunConfig& c) -> double& { return c.verify.tol.generic_fraction; });
    number("tol.casimir", [](RunConfig& c) -> double& { return c.verify.tol.casimir; });
    number("tol.non_casimir_threshold", [](RunConfig& c) -> double& { return c.verify.tol.non_casimir_threshold; });
    number("tol.alpha", [](RunConfig& c) -> double& { return c.verify.tol.alpha; });
    number("tol.alpha_control_threshold", [](RunConfig& c) -> double& { return c.verify.tol.alpha_control_threshold; });
    number("tol.involution", [](RunConfig& c) -> double& { return c.verify.tol.involution; });
    number("tol.agreement", [](RunConfig& c) -> double& { return c.verify.tol.agreement; });
    number("tol.commute", [](RunConfig& c) -> double& { return c.verify.tol.commute; });
    number("tol.measure", [](RunConfig& c) -> double& { return c.verify.tol.measure; });
    number("tol.unweighted_divergence_threshold", [](RunConfig& c) -> double& { return c.verify.tol.unweighted_divergence_threshold; });
    number("tol.divergence_step", [](RunConfig& c) -> double& { return c.verify.tol.divergence_step; });
    number("tol.consistency", [](RunConfig& c) -> double& { return c.verify.tol.consistency; });
    number("tol.consistency_min_order", [](RunConfig& c) -> double& { return c.verify.tol.consistency_min_order; });

    t["inertia"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.params.inertia = to_vec3(k, v);
    };
    t["K"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.K = to_vec3(k, v);
    };
    t["gamma"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.gamma = to_vec3(k, v);
    };
    t["rotation"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.rotation = to_vec3(k, v);
    };
    t["model"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.model = to_model(v);
    };
    t["variant"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.verify.variants = to_variants(v);
    };
    t["steps"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.integration.steps = to_int(k, v);
    };
    t["stride"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.integration.sample_stride = to_int(k, v);
    };
    t["renormalize_every"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.integration.renormalize_every = to_int(k, v);
    };
    t["substeps"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.integration.substeps = static_cast<int>(to_int(k, v));
    };
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const std::int64_t seed = to_int(k, v);
      if (seed < 0) throw ConfigError("seed must be non-negative");
      c.verify.samples.seed = static_cast<std::uint64_t>(seed);
    };
    t["samples"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.verify.samples.count = static_cast<int>(to_int(k, v));
    };
    t["nonintegrability_samples"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.verify.nonintegrability_samples = static_cast<int>(to_int(k, v));
    };
    t["output"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.output = v;
    };
    t["report"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.report = v;
    };
    return t;
  }();
  return table;
}

}  // namespace

Mat3 RunConfig::initial_rotation() const {
  if (rotation) return so3::exp_rotation(*rotation);
  return so3::rotation_with_poisson_vector(gamma);
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!K.allFinite()) throw ConfigError("K must be finite");
  if (!gamma.allFinite() || std::abs(gamma.norm() - 1.0) > 1e-10) {
    throw ConfigError("gamma must be a unit vector");
  }
  if (rotation && !rotation->allFinite()) throw ConfigError("rotation must be finite");
  if (!std::isfinite(x) || !std::isfinite(y)) throw ConfigError("x, y must be finite");
  if (!(integration.dt > 0.0) || !std::isfinite(integration.dt)) {
    throw ConfigError("dt must be positive");
  }
  if (integration.steps < 1) throw ConfigError("steps must be >= 1");
  if (integration.sample_stride < 1) throw ConfigError("stride must be >= 1");
  if (integration.renormalize_every < 0) {
    throw ConfigError("renormalize_every must be >= 0");
  }
  if (integration.substeps < 1) throw ConfigError("substeps must be >= 1");
  try {
    verify.samples.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (verify.nonintegrability_samples < 1) {
    throw ConfigError("nonintegrability_samples must be >= 1");
  }
  for (double v : {verify.commute_dt, verify.consistency_dt, verify.consistency_duration}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("integration steps and durations must be positive");
    }
  }
  if (verify.commute_s < 0.0 || verify.commute_t < 0.0) {
    throw ConfigError("flow times must be non-negative");
  }
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + text + "' is not key=value");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig apply_values(RunConfig base, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
    it->second(base, key, value);
  }
  if (base.gamma.allFinite() && base.gamma.norm() > 0.0) {
    base.gamma.normalize();
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides) {
  KeyValues values;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file '" + *path + "'");
    values = parse_key_values(in);
  }
  for (const std::string& o : overrides) values.push_back(parse_override(o));
  return apply_values(RunConfig{}, values);
}

}  // namespace chaplygin::cli
