#include "chaplygin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace chaplygin::verify {

void SampleSpec::validate() const {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!std::isfinite(k_box) || !(k_box > 0.0)) {
    throw std::invalid_argument("K sampling box must be finite and positive");
  }
}

std::vector<Vec3> draw_unit_vectors(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  while (static_cast<int>(out.size()) < count) {
    const Vec3 v(normal(rng), normal(rng), normal(rng));
    const double n = v.norm();
    if (n > 1e-12) out.push_back(v / n);
  }
  return out;
}

std::vector<ReducedState> draw_states(const SampleSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> box(-spec.k_box, spec.k_box);
  std::vector<ReducedState> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  while (static_cast<int>(out.size()) < spec.count) {
    const Vec3 k(box(rng), box(rng), box(rng));
    const Vec3 g(normal(rng), normal(rng), normal(rng));
    const double n = g.norm();
    if (n > 1e-12) out.push_back({k, g / n});
  }
  return out;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

void write_report(std::ostream& out, const VerificationReport& report) {
  std::ostringstream line;
  line << std::setprecision(17);
  for (const CheckResult& c : report.checks) {
    line.str("");
    line << "check=" << c.name << " status=" << (c.passed ? "pass" : "fail")
         << " worst=" << c.worst << " tol=" << c.tolerance
         << " seed=" << c.seed;
    if (!c.passed && c.witness) {
      const Vec6 z = to_vector(*c.witness);
      line << " witness=";
      for (int i = 0; i < 6; ++i) line << (i ? "," : "") << z(i);
    }
    out << line.str() << '\n';
  }
}

namespace {

// worst = max value; passes iff worst < tol.
CheckResult bounded_above(std::string name, const std::vector<double>& values,
                          const std::vector<ReducedState>& states, double tol,
                          std::uint64_t seed) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tol;
  r.bound = Bound::below;
  r.samples = static_cast<int>(values.size());
  r.seed = seed;
  const auto it = std::max_element(values.begin(), values.end());
  if (it != values.end()) {
    r.worst = *it;
    if (!states.empty()) r.witness = states[static_cast<std::size_t>(it - values.begin())];
  }
  r.passed = std::isfinite(r.worst) && r.worst < tol;
  return r;
}

// Generically nonzero: at least `fraction` of the values exceed threshold.
// worst is the order statistic that has to clear the threshold.
CheckResult generically_above(std::string name,
                              const std::vector<double>& values,
                              const std::vector<ReducedState>& states,
                              double threshold, double fraction,
                              std::uint64_t seed) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = threshold;
  r.bound = Bound::above;
  r.samples = static_cast<int>(values.size());
  r.seed = seed;
  if (values.empty()) return r;

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto allowed = static_cast<std::size_t>(
      std::floor(static_cast<double>(values.size()) * (1.0 - fraction) + 1e-9));
  r.worst = sorted[std::min(allowed, sorted.size() - 1)];

  const auto above = std::count_if(values.begin(), values.end(),
                                   [&](double v) { return v > threshold; });
  const double share = static_cast<double>(above) / static_cast<double>(values.size());
  r.passed = share >= fraction;

  const auto low = std::min_element(values.begin(), values.end());
  if (!states.empty()) r.witness = states[static_cast<std::size_t>(low - values.begin())];
  std::ostringstream note;
  note << "share above threshold " << share;
  r.note = note.str();
  return r;
}

std::string variant_name(BracketVariant v) { return std::string(to_string(v)); }

}  // namespace

CheckResult jacobi_suite(const SphereParams& p, BracketVariant variant,
                         const SampleSpec& spec, const Tolerances& tol) {
  const BracketTable table = BracketTable::of(variant, p);
  const std::vector<ReducedState> states = draw_states(spec);
  std::vector<double> values;
  values.reserve(states.size());
  for (const ReducedState& s : states) {
    values.push_back(brackets::max_jacobiator(table, s).value);
  }
  const std::string name = "jacobi." + variant_name(variant);
  const bool poisson = variant == BracketVariant::scaled || p.mr2() == 0.0;
  if (poisson) return bounded_above(name, values, states, tol.jacobi, spec.seed);
  return generically_above(name, values, states, tol.non_jacobi_threshold,
                           tol.generic_fraction, spec.seed);
}

std::vector<CheckResult> casimir_suite(const SphereParams& p,
                                       BracketVariant variant,
                                       const SampleSpec& spec,
                                       const Tolerances& tol) {
  const BracketTable table = BracketTable::of(variant, p);
  const std::vector<ReducedState> states = draw_states(spec);
  const ScalarField gnorm = fields::gamma_norm_squared();
  const ScalarField kgamma = fields::vertical_momentum();
  std::vector<double> gnorm_values;
  std::vector<double> kgamma_values;
  for (const ReducedState& s : states) {
    const Mat6 lambda = table.coefficients(s);
    gnorm_values.push_back((lambda * gnorm.gradient(s)).cwiseAbs().maxCoeff());
    kgamma_values.push_back((lambda * kgamma.gradient(s)).cwiseAbs().maxCoeff());
  }
  const std::string prefix = "casimir." + variant_name(variant);
  std::vector<CheckResult> out;
  out.push_back(bounded_above(prefix + ".gamma_norm", gnorm_values, states,
                              tol.casimir, spec.seed));
  if (variant == BracketVariant::standard && p.mr2() > 0.0) {
    out.push_back(generically_above(prefix + ".vertical_momentum", kgamma_values,
                                    states, tol.non_casimir_threshold,
                                    tol.generic_fraction, spec.seed));
  } else {
    out.push_back(bounded_above(prefix + ".vertical_momentum", kgamma_values,
                                states, tol.casimir, spec.seed));
  }
  return out;
}

double nonintegrability_functional(const SphereParams& p, const Vec3& gamma) {
  const Mat3 t = model::t_matrix(p, gamma);
  return t.trace() - gamma.dot(t * gamma);
}

CheckResult nonintegrability_check(const SphereParams& p, int count,
                                   std::uint64_t seed, std::string name) {
  CheckResult r;
  r.name = std::move(name);
  r.bound = Bound::above;
  r.tolerance = 0.0;
  r.samples = count;
  r.seed = seed;
  r.worst = std::numeric_limits<double>::infinity();
  for (const Vec3& g : draw_unit_vectors(count, seed)) {
    const double v = nonintegrability_functional(p, g);
    if (!(v >= r.worst)) {
      r.worst = v;
      r.witness = ReducedState{Vec3::Zero(), g};
    }
  }
  r.passed = r.worst > 0.0;
  return r;
}

double alpha_pairing_defect(const SphereParams& p, const ReducedState& s,
                            bool drop_correction) {
  const Mat6 lambda = brackets::standard_coeffs(p, s);
  Vec6 alpha;
  const Vec3 dgamma_part =
      drop_correction ? s.K : Vec3(s.K + p.mr2() * model::omega_body(p, s));
  alpha << s.gamma, dgamma_part;
  // Column l of lambda is X_{z_l} (component i is {z_i, z_l}).
  return (lambda.transpose() * alpha).cwiseAbs().maxCoeff();
}

std::vector<CheckResult> alpha_annihilation(const SphereParams& p,
                                            const SampleSpec& spec,
                                            const Tolerances& tol) {
  const std::vector<ReducedState> states = draw_states(spec);
  std::vector<double> values;
  std::vector<double> control;
  for (const ReducedState& s : states) {
    values.push_back(alpha_pairing_defect(p, s));
    control.push_back(alpha_pairing_defect(p, s, true));
  }
  return {bounded_above("alpha", values, states, tol.alpha, spec.seed),
          generically_above("alpha.control", control, states,
                            tol.alpha_control_threshold, tol.generic_fraction,
                            spec.seed)};
}

double flow_commutator_defect(const SphereParams& p, const BracketTable& table,
                              const ReducedState& s0, double s, double t,
                              double dt) {
  const OdeSystem xh =
      dynamics::hamiltonian_field_system(p, table, fields::hamiltonian(p));
  const OdeSystem xj =
      dynamics::hamiltonian_field_system(p, table, fields::half_k_squared());
  auto flow = [dt](const OdeSystem& sys, const VecX& x, double time) -> VecX {
    if (time == 0.0) return x;
    const auto steps = std::max<std::int64_t>(1, std::llround(time / dt));
    IntegrationOptions o;
    o.dt = time / static_cast<double>(steps);
    o.steps = steps;
    o.sample_stride = steps;
    return dynamics::integrate(sys, x, o).final_state;
  };
  const VecX x0 = to_vector(s0);
  const VecX a = flow(xj, flow(xh, x0, t), s);
  const VecX b = flow(xh, flow(xj, x0, s), t);
  return (a - b).norm();
}

std::vector<CheckResult> involution_and_commutation(const SphereParams& p,
                                                    const ReducedState& s0,
                                                    double s, double t,
                                                    double dt,
                                                    const Tolerances& tol) {
  const ScalarField h = fields::hamiltonian(p);
  const ScalarField j = fields::half_k_squared();
  std::vector<double> involution;
  for (BracketVariant v : {BracketVariant::standard, BracketVariant::affine,
                           BracketVariant::scaled}) {
    involution.push_back(
        std::abs(brackets::bracket_eval(BracketTable::of(v, p), h, j, s0)));
  }
  const std::vector<ReducedState> witness(involution.size(), s0);

  CheckResult scaled;
  scaled.name = "commute";
  scaled.tolerance = tol.commute;
  scaled.samples = 1;
  scaled.worst = flow_commutator_defect(p, BracketTable::scaled(p), s0, s, t, dt);
  scaled.passed = scaled.worst < tol.commute;
  scaled.witness = s0;

  CheckResult control = scaled;
  control.name = "commute.unscaled_control";
  control.bound = Bound::above;
  control.worst = flow_commutator_defect(p, BracketTable::affine(p), s0, s, t, dt);
  control.passed = control.worst > tol.commute;

  return {bounded_above("involution", involution, witness, tol.involution, 0),
          scaled, control};
}

std::vector<CheckResult> measure_suite(const SphereParams& p,
                                       const SampleSpec& spec,
                                       const Tolerances& tol) {
  const std::vector<ReducedState> states = draw_states(spec);
  std::vector<double> weighted;
  std::vector<double> unweighted;
  for (const ReducedState& s : states) {
    weighted.push_back(
        std::abs(dynamics::divergence_weighted(p, s, tol.divergence_step)));
    unweighted.push_back(
        std::abs(dynamics::divergence_unweighted(p, s, tol.divergence_step)));
  }
  return {bounded_above("measure", weighted, states, tol.measure, spec.seed),
          generically_above("measure.unweighted_control", unweighted, states,
                            tol.unweighted_divergence_threshold,
                            tol.generic_fraction, spec.seed)};
}

CheckResult dynamics_agreement(const SphereParams& p, const SampleSpec& spec,
                               const Tolerances& tol) {
  const std::vector<ReducedState> states = draw_states(spec);
  const ScalarField h = fields::hamiltonian(p);
  const BracketTable standard = BracketTable::standard(p);
  const BracketTable affine = BracketTable::affine(p);
  std::vector<double> values;
  for (const ReducedState& s : states) {
    const Vec6 rhs = dynamics::reduced_rhs(p, s);
    const double a = (brackets::ham_vector_field(standard, h, s) - rhs).cwiseAbs().maxCoeff();
    const double b = (brackets::ham_vector_field(affine, h, s) - rhs).cwiseAbs().maxCoeff();
    values.push_back(std::max(a, b));
  }
  return bounded_above("agreement", values, states, tol.agreement, spec.seed);
}

double reduction_defect(const SphereParams& p, const MultiplierState& initial,
                        double duration, double dt) {
  const auto steps = std::max<std::int64_t>(1, std::llround(duration / dt));
  IntegrationOptions o;
  o.dt = duration / static_cast<double>(steps);
  o.steps = steps;
  const OdeSystem full = dynamics::multiplier_system(p);
  const OdeSystem reduced = dynamics::reduced_system(p);
  const Trajectory a = dynamics::integrate(full, dynamics::to_vector(initial), o);
  const Trajectory b = dynamics::integrate(
      reduced, to_vector(dynamics::project(p, initial)), o);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Vec6 za = to_vector(full.project(a.samples[i].state));
    const Vec6 zb = b.samples[i].state;
    worst = std::max(worst, (za - zb).norm());
  }
  return worst;
}

std::vector<CheckResult> reduction_consistency(const SphereParams& p,
                                               const MultiplierState& initial,
                                               double duration, double dt,
                                               const Tolerances& tol) {
  const double residual =
      dynamics::constraint_residuals(p, initial).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw std::invalid_argument(
        "reduction_consistency: initial state violates the rolling constraints");
  }
  const ReducedState start = dynamics::project(p, initial);

  CheckResult defect;
  defect.name = "consistency";
  defect.tolerance = tol.consistency;
  defect.samples = 1;
  defect.witness = start;
  defect.worst = reduction_defect(p, initial, duration, dt);
  defect.passed = defect.worst < tol.consistency;

  // The fine-step defect sits at roundoff, so the order comes from two
  // coarse runs.
  CheckResult order = defect;
  order.name = "consistency.order";
  order.bound = Bound::above;
  order.tolerance = tol.consistency_min_order;
  const double coarse = reduction_defect(p, initial, duration, 0.04);
  const double fine = reduction_defect(p, initial, duration, 0.02);
  if (coarse == 0.0 && fine == 0.0) {
    order.worst = std::numeric_limits<double>::infinity();
    order.note = "defect identically zero";
  } else {
    order.worst = std::log2(coarse / fine);
  }
  order.passed = order.worst >= tol.consistency_min_order;
  return {defect, order};
}

std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "jacobi") return Suite::jacobi;
  if (name == "casimir") return Suite::casimir;
  if (name == "nonintegrability") return Suite::nonintegrability;
  if (name == "alpha") return Suite::alpha;
  if (name == "commute") return Suite::commute;
  if (name == "measure") return Suite::measure;
  if (name == "consistency") return Suite::consistency;
  return std::nullopt;
}

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::jacobi: return "jacobi";
    case Suite::casimir: return "casimir";
    case Suite::nonintegrability: return "nonintegrability";
    case Suite::alpha: return "alpha";
    case Suite::commute: return "commute";
    case Suite::measure: return "measure";
    case Suite::consistency: return "consistency";
  }
  return "jacobi";
}

namespace {

void append(std::vector<CheckResult>& out, std::vector<CheckResult> more) {
  for (CheckResult& c : more) out.push_back(std::move(c));
}

std::vector<CheckResult> run_suite(const SphereParams& p,
                                   const VerifyConfig& c, Suite suite) {
  std::vector<CheckResult> out;
  switch (suite) {
    case Suite::jacobi:
      for (BracketVariant v : c.variants) out.push_back(jacobi_suite(p, v, c.samples, c.tol));
      break;
    case Suite::casimir:
      for (BracketVariant v : c.variants) append(out, casimir_suite(p, v, c.samples, c.tol));
      break;
    case Suite::nonintegrability: {
      out.push_back(nonintegrability_check(p, c.nonintegrability_samples,
                                           c.samples.seed));
      SphereParams near = p;
      near.inertia = Vec3(1.0, 1.0, 1.0 + 1e-6);
      out.push_back(nonintegrability_check(near, c.nonintegrability_samples,
                                           c.samples.seed,
                                           "nonintegrability.near_degenerate"));
      break;
    }
    case Suite::alpha:
      append(out, alpha_annihilation(p, c.samples, c.tol));
      break;
    case Suite::commute:
      append(out, involution_and_commutation(p, c.probe, c.commute_s,
                                             c.commute_t, c.commute_dt, c.tol));
      break;
    case Suite::measure:
      append(out, measure_suite(p, c.samples, c.tol));
      break;
    case Suite::consistency: {
      const FullState start{so3::rotation_with_poisson_vector(c.probe.gamma),
                            0.0, 0.0, c.probe.K};
      append(out, reduction_consistency(
                      p, dynamics::consistent_multiplier_state(p, start),
                      c.consistency_duration, c.consistency_dt, c.tol));
      break;
    }
  }
  return out;
}

}  // namespace

VerificationReport run(const SphereParams& p, const VerifyConfig& config,
                       const std::vector<Suite>& suites) {
  VerificationReport report;
  report.params = p;
  report.seed = config.samples.seed;
  for (Suite suite : suites) {
    try {
      std::vector<CheckResult> checks = run_suite(p, config, suite);
      for (CheckResult& c : checks) c.seed = config.samples.seed;
      append(report.checks, std::move(checks));
    } catch (const std::exception& e) {
      CheckResult failed;
      failed.name = std::string(to_string(suite));
      failed.seed = config.samples.seed;
      failed.worst = std::numeric_limits<double>::quiet_NaN();
      failed.note = e.what();
      report.checks.push_back(std::move(failed));
    }
  }
  return report;
}

VerificationReport run_all(const SphereParams& p, const VerifyConfig& config) {
  VerificationReport report =
      run(p, config,
          {Suite::jacobi, Suite::casimir, Suite::nonintegrability, Suite::alpha,
           Suite::commute, Suite::measure, Suite::consistency});
  try {
    report.checks.push_back(dynamics_agreement(p, config.samples, config.tol));
  } catch (const std::exception& e) {
    CheckResult failed;
    failed.name = "agreement";
    failed.seed = config.samples.seed;
    failed.worst = std::numeric_limits<double>::quiet_NaN();
    failed.note = e.what();
    report.checks.push_back(std::move(failed));
  }
  return report;
}

}  // namespace chaplygin::verify
