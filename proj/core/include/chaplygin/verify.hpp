#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaplygin/brackets.hpp"
#include "chaplygin/dynamics.hpp"
#include "chaplygin/model.hpp"

namespace chaplygin::verify {

/// Random states: gamma uniform on S^2, K uniform in [-k_box, k_box]^3.
struct SampleSpec {
  int count = 1000;
  std::uint64_t seed = 1;
  double k_box = 3.0;

  void validate() const;
};

std::vector<ReducedState> draw_states(const SampleSpec& spec);
std::vector<Vec3> draw_unit_vectors(int count, std::uint64_t seed);

/// Frozen defaults. "threshold" entries are lower bounds for quantities that
/// must be generically nonzero; generic_fraction is the share of samples
/// that has to clear them.
struct Tolerances {
  double jacobi = 1e-9;
  double non_jacobi_threshold = 1e-3;
  double generic_fraction = 0.99;
  double casimir = 1e-12;
  double non_casimir_threshold = 1e-3;
  double alpha = 1e-12;
  double alpha_control_threshold = 1e-3;
  double involution = 1e-12;
  double agreement = 1e-12;
  double commute = 1e-6;
  double measure = 1e-6;
  double unweighted_divergence_threshold = 1e-3;
  double divergence_step = 1e-5;
  double consistency = 1e-6;
  double consistency_min_order = 3.5;
};

/// Comparison a check applies: worst < tol, or worst > tol.
enum class Bound { below, above };

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::below;
  int samples = 0;
  std::uint64_t seed = 0;
  std::optional<ReducedState> witness;
  std::string note;
};

struct VerificationReport {
  SphereParams params;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// One record per line:
///   check=<name> status=<pass|fail> worst=<v> tol=<v> seed=<n>
/// followed by witness=<K1,K2,K3,g1,g2,g3> on failures that have one.
void write_report(std::ostream& out, const VerificationReport& report);

// ---------------------------------------------------------------------------
// Individual suites

/// Max |Jacobiator| over samples and triples. The bracket is expected to be
/// Poisson when it is the scaled variant or when m r^2 = 0; otherwise the
/// check certifies it is not (generic_fraction of samples above
/// non_jacobi_threshold).
CheckResult jacobi_suite(const SphereParams& p, BracketVariant variant,
                         const SampleSpec& spec, const Tolerances& tol = {});

/// |{z_i, |gamma|^2}| for every variant, and |{z_i, K.gamma}| which must
/// vanish for affine/scaled and generically not for standard.
std::vector<CheckResult> casimir_suite(const SphereParams& p,
                                       BracketVariant variant,
                                       const SampleSpec& spec,
                                       const Tolerances& tol = {});

/// trace T(gamma) - gamma^T T(gamma) gamma.
double nonintegrability_functional(const SphereParams& p, const Vec3& gamma);

/// Minimum of the functional over random unit vectors; passes iff > 0.
CheckResult nonintegrability_check(const SphereParams& p, int count,
                                   std::uint64_t seed,
                                   std::string name = "nonintegrability");

/// max_i |alpha(X_{K_i})|, |alpha(X_{gamma_i})| for the standard table with
/// alpha = (K + m r^2 w) . dgamma + gamma . dK. With drop_correction the
/// m r^2 w term is left out (negative control).
double alpha_pairing_defect(const SphereParams& p, const ReducedState& s,
                            bool drop_correction = false);

std::vector<CheckResult> alpha_annihilation(const SphereParams& p,
                                            const SampleSpec& spec,
                                            const Tolerances& tol = {});

/// |Phi^J_s(Phi^H_t(s0)) - Phi^H_t(Phi^J_s(s0))| with X_F the Hamiltonian
/// fields of the given table.
double flow_commutator_defect(const SphereParams& p, const BracketTable& table,
                              const ReducedState& s0, double s, double t,
                              double dt);

std::vector<CheckResult> involution_and_commutation(
    const SphereParams& p, const ReducedState& s0, double s, double t,
    double dt = 1e-4, const Tolerances& tol = {});

/// Weighted divergence below tol.measure; unweighted divergence generically
/// above unweighted_divergence_threshold.
std::vector<CheckResult> measure_suite(const SphereParams& p,
                                       const SampleSpec& spec,
                                       const Tolerances& tol = {});

/// Lambda grad H against (K x w, gamma x w) for the standard and affine
/// tables.
CheckResult dynamics_agreement(const SphereParams& p, const SampleSpec& spec,
                               const Tolerances& tol = {});

/// Max |(K, gamma) of the multiplier flow - reduced flow| over [0, T].
double reduction_defect(const SphereParams& p, const MultiplierState& initial,
                        double duration, double dt);

/// Defect at dt, plus the observed convergence order from two coarse runs.
std::vector<CheckResult> reduction_consistency(const SphereParams& p,
                                               const MultiplierState& initial,
                                               double duration, double dt,
                                               const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Batches

struct VerifyConfig {
  SampleSpec samples;
  Tolerances tol;
  std::vector<BracketVariant> variants{BracketVariant::standard,
                                       BracketVariant::affine,
                                       BracketVariant::scaled};
  int nonintegrability_samples = 10000;
  ReducedState probe{Vec3(1.0, -0.5, 0.7), Vec3(0.3, -0.4, 0.866).normalized()};
  double commute_s = 0.1;
  double commute_t = 0.1;
  double commute_dt = 1e-4;
  double consistency_duration = 10.0;
  double consistency_dt = 1e-3;
};

enum class Suite { jacobi, casimir, nonintegrability, alpha, commute, measure,
                   consistency };

std::optional<Suite> parse_suite(std::string_view name);
std::string_view to_string(Suite suite);

/// Runs the listed suites. Exceptions from a suite become failed entries.
VerificationReport run(const SphereParams& p, const VerifyConfig& config,
                       const std::vector<Suite>& suites);

/// Every suite, plus the bracket/dynamics agreement check.
VerificationReport run_all(const SphereParams& p, const VerifyConfig& config = {});

}  // namespace chaplygin::verify
