#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "chaplygin/dynamics.hpp"
#include "oracles.hpp"

namespace {

using namespace chaplygin;

const SphereParams kCanonical{};
const ReducedState kGeneric{Vec3(1.0, -0.5, 0.7), Vec3(0.3, -0.4, 0.866).normalized()};

FullState generic_full() {
  FullState s;
  s.g = so3::rotation_with_poisson_vector(kGeneric.gamma);
  s.x = 0.25;
  s.y = -1.0;
  s.K = kGeneric.K;
  return s;
}

TEST(Reduced, RhsIsCrossProducts) {
  oracle::Sampler rng(51);
  for (int n = 0; n < 100; ++n) {
    const ReducedState s = rng.state();
    const Vec3 w = oracle::omega(kCanonical, s.K, s.gamma);
    const Vec6 d = dynamics::reduced_rhs(kCanonical, s);
    EXPECT_LT((d.head<3>() - oracle::cross(s.K, w)).norm(), 1e-13);
    EXPECT_LT((d.tail<3>() - oracle::cross(s.gamma, w)).norm(), 1e-13);
  }
}

TEST(Reduced, VerticalSpinIsAnEquilibrium) {
  const ReducedState s{Vec3(0, 0, 2.0), Vec3(0, 0, 1)};
  const Trajectory traj = dynamics::integrate(
      dynamics::reduced_system(kCanonical), to_vector(s), {1e-2, 1000, 100, 0, 1});
  EXPECT_EQ(traj.final_state, VecX(to_vector(s)));
}

TEST(Full, RhsProjectsOntoReducedRhs) {
  oracle::Sampler rng(52);
  for (int n = 0; n < 50; ++n) {
    FullState s;
    s.g = rng.rotation();
    s.K = rng.box(3.0);
    const FullRhs d = dynamics::full_rhs(kCanonical, s);
    const Vec6 reduced = dynamics::reduced_rhs(kCanonical, dynamics::project(s));
    EXPECT_LT((d.K_dot - reduced.head<3>()).norm(), 1e-14);
    EXPECT_LT((so3::poisson_vector(d.g_dot) - reduced.tail<3>()).norm(), 1e-14);
    // Rolling without slipping: the contact point moves with r (w_space x e3).
    const Vec3 ws = s.g * oracle::omega(kCanonical, s.K, so3::poisson_vector(s.g));
    const Vec3 v = kCanonical.radius * oracle::cross(ws, Vec3::UnitZ());
    EXPECT_NEAR(d.x_dot, v.x(), 1e-13);
    EXPECT_NEAR(d.y_dot, v.y(), 1e-13);
  }
}

TEST(Full, VectorLayoutRoundTrip) {
  const FullState s = generic_full();
  const VecX v = dynamics::to_vector(s);
  ASSERT_EQ(v.size(), 14);
  EXPECT_EQ(v(1), s.g(0, 1));
  EXPECT_EQ(v(3), s.g(1, 0));
  const FullState back = dynamics::full_state_from_vector(v);
  EXPECT_EQ(back.g, s.g);
  EXPECT_EQ(back.K, s.K);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.y, s.y);
  EXPECT_THROW(dynamics::full_state_from_vector(VecX::Zero(13)), std::invalid_argument);
}

TEST(Full, AttitudeStaysOrthonormalWithoutRepair) {
  const Trajectory traj =
      dynamics::integrate(dynamics::full_system(kCanonical),
                          dynamics::to_vector(generic_full()), {1e-3, 10000, 1000, 0, 1});
  for (const Sample& smp : traj.samples) {
    const FullState s = dynamics::full_state_from_vector(smp.state);
    EXPECT_LT(so3::orthonormality_defect(s.g), 1e-9) << smp.t;
  }
}

TEST(Full, RepairKeepsAttitudeOnTheGroup) {
  const Trajectory traj =
      dynamics::integrate(dynamics::full_system(kCanonical),
                          dynamics::to_vector(generic_full()), {5e-2, 2000, 2000, 10, 1});
  const FullState s = dynamics::full_state_from_vector(traj.final_state);
  EXPECT_LT(so3::orthonormality_defect(s.g), 1e-12);
}

TEST(Multiplier, FreeLimitIsEulerTop) {
  oracle::Sampler rng(53);
  for (int n = 0; n < 20; ++n) {
    MultiplierState s;
    s.g = rng.rotation();
    s.M = rng.box(2.0);
    s.px = 0.3;
    s.py = -0.1;
    const MultiplierRhs d = dynamics::multiplier_rhs(kCanonical, s, false);
    const Vec3 w = s.M.cwiseQuotient(kCanonical.inertia);
    EXPECT_EQ(d.lambda_x, 0.0);
    EXPECT_EQ(d.lambda_y, 0.0);
    EXPECT_LT((d.M_dot - oracle::cross(s.M, w)).norm(), 1e-14);
    EXPECT_EQ(d.px_dot, 0.0);
    EXPECT_EQ(d.py_dot, 0.0);
    EXPECT_NEAR(d.x_dot, s.px / kCanonical.mass, 1e-15);
    EXPECT_LT((d.g_dot - s.g * so3::hat(w)).norm(), 1e-14);
  }
}

TEST(Multiplier, ConsistentStateProjectsBack) {
  oracle::Sampler rng(54);
  for (int n = 0; n < 50; ++n) {
    FullState f;
    f.g = rng.rotation();
    f.K = rng.box(3.0);
    const MultiplierState m = dynamics::consistent_multiplier_state(kCanonical, f);
    EXPECT_LT(dynamics::constraint_residuals(kCanonical, m).norm(), 1e-14);
    const ReducedState r = dynamics::project(kCanonical, m);
    EXPECT_LT((r.K - f.K).norm(), 1e-13);
    EXPECT_LT((r.gamma - so3::poisson_vector(f.g)).norm(), 1e-15);
    // Same motion: the centre-of-mass omega equals the reduced omega.
    const Vec3 w = m.M.cwiseQuotient(kCanonical.inertia);
    EXPECT_LT((w - oracle::omega(kCanonical, f.K, r.gamma)).norm(), 1e-13);
  }
}

TEST(Multiplier, MultipliersFreezeResiduals) {
  const MultiplierState m = dynamics::consistent_multiplier_state(kCanonical, generic_full());
  const MultiplierRhs d = dynamics::multiplier_rhs(kCanonical, m);
  EXPECT_LT(d.residual_rate, 1e-13);
  EXPECT_GT(std::hypot(d.lambda_x, d.lambda_y), 1e-3);
}

TEST(Multiplier, ResidualsStaySmallOverTenThousandSteps) {
  const MultiplierState m = dynamics::consistent_multiplier_state(kCanonical, generic_full());
  const Trajectory traj = dynamics::integrate(dynamics::multiplier_system(kCanonical),
                                              dynamics::to_vector(m), {1e-3, 10000, 100, 0, 1});
  double worst = 0.0;
  for (const Sample& smp : traj.samples) {
    const MultiplierState s = dynamics::multiplier_state_from_vector(smp.state);
    worst = std::max(worst, dynamics::constraint_residuals(kCanonical, s).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-8);
}

// Max-norm error at t = T against a run with 64 substeps per step.
double global_error(const OdeSystem& sys, const VecX& x0, double dt, double T) {
  const auto steps = static_cast<std::int64_t>(std::llround(T / dt));
  const VecX coarse = dynamics::integrate(sys, x0, {dt, steps, steps, 0, 1}).final_state;
  const VecX fine = dynamics::integrate(sys, x0, {dt, steps, steps, 0, 64}).final_state;
  return (coarse - fine).cwiseAbs().maxCoeff();
}

TEST(Rk4, FourthOrderOnAllModels) {
  const MultiplierState m = dynamics::consistent_multiplier_state(kCanonical, generic_full());
  const struct {
    OdeSystem sys;
    VecX x0;
  } cases[] = {
      {dynamics::reduced_system(kCanonical), to_vector(kGeneric)},
      {dynamics::full_system(kCanonical), dynamics::to_vector(generic_full())},
      {dynamics::multiplier_system(kCanonical), dynamics::to_vector(m)},
      {dynamics::rescaled_system(kCanonical), to_vector(kGeneric)},
  };
  for (const auto& c : cases) {
    const double e1 = global_error(c.sys, c.x0, 0.1, 4.0);
    const double e2 = global_error(c.sys, c.x0, 0.05, 4.0);
    const double order = std::log2(e1 / e2);
    EXPECT_GT(order, 3.7) << to_string(c.sys.kind);
    EXPECT_LT(order, 4.3) << to_string(c.sys.kind);
  }
}

TEST(Rk4, SingleStepMatchesHandExpansion) {
  // x' = x on R^1: one RK4 step multiplies by 1 + h + h^2/2 + h^3/6 + h^4/24.
  OdeSystem sys;
  sys.rhs = [](const VecX& x) { return x; };
  VecX x0(1);
  x0 << 2.0;
  const double h = 0.1;
  const double factor = 1 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
  EXPECT_NEAR(dynamics::rk4_step(sys, x0, h)(0), 2.0 * factor, 1e-15);
}

TEST(Integrate, SamplingGrid) {
  const Trajectory traj = dynamics::integrate(dynamics::reduced_system(kCanonical),
                                              to_vector(kGeneric), {1e-2, 100, 30, 0, 1});
  ASSERT_EQ(traj.samples.size(), 4u);  // steps 0, 30, 60, 90
  EXPECT_EQ(traj.samples[0].state, VecX(to_vector(kGeneric)));
  EXPECT_NEAR(traj.samples[3].t, 0.9, 1e-15);
  EXPECT_EQ(traj.samples[3].tau, traj.samples[3].t);
  EXPECT_EQ(traj.model, ModelKind::reduced);
  EXPECT_EQ(traj.integrator, "rk4");
  EXPECT_EQ(traj.step, 1e-2);
  EXPECT_EQ(traj.final_state.size(), 6);
}

TEST(Integrate, ConservesFirstIntegrals) {
  const Trajectory traj = dynamics::integrate(dynamics::reduced_system(kCanonical),
                                              to_vector(kGeneric), {1e-3, 10000, 1000, 0, 1});
  const FirstIntegrals f0 = traj.samples.front().integrals;
  for (const Sample& smp : traj.samples) {
    EXPECT_NEAR(smp.integrals.H, f0.H, 1e-12 * std::abs(f0.H));
    EXPECT_NEAR(smp.integrals.J, f0.J, 1e-12 * std::abs(f0.J));
    EXPECT_NEAR(smp.integrals.Kgamma, f0.Kgamma, 1e-12 * std::abs(f0.Kgamma));
    EXPECT_NEAR(smp.integrals.gnorm, 1.0, 1e-12);
  }
}

TEST(Integrate, RejectsBadOptions) {
  const OdeSystem sys = dynamics::reduced_system(kCanonical);
  const VecX x0 = to_vector(kGeneric);
  EXPECT_THROW(dynamics::integrate(sys, x0, {0.0, 10, 1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(dynamics::integrate(sys, x0, {1e-3, 0, 1, 0, 1}), std::invalid_argument);
  EXPECT_THROW(dynamics::integrate(sys, x0, {1e-3, 10, 0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(dynamics::integrate(sys, x0, {1e-3, 10, 1, -1, 1}), std::invalid_argument);
  EXPECT_THROW(dynamics::integrate(sys, x0, {1e-3, 10, 1, 0, 0}), std::invalid_argument);
}

TEST(Integrate, NonFiniteStateAborts) {
  OdeSystem sys;
  sys.rhs = [](const VecX& x) { return VecX(x.cwiseProduct(x)); };
  sys.project = [](const VecX&) { return ReducedState{}; };
  VecX x0(1);
  x0 << 1.0;
  try {
    dynamics::integrate(sys, x0, {0.5, 1000, 1, 0, 1});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.step(), 0);
    EXPECT_LT(e.step(), 1000);
  }
}

TEST(Rescaled, UniformInertiaClockIsLinear) {
  const SphereParams p{1.0, 1.0, Vec3(2, 2, 2)};
  const Trajectory traj = dynamics::integrate_rescaled(p, kGeneric, 1e-3, 5000, {1e-3, 1, 500, 0, 1});
  const double ratio = std::sqrt(2.0 / 3.0);
  for (const Sample& smp : traj.samples) {
    EXPECT_NEAR(smp.t, ratio * smp.tau, 1e-10);
  }
  EXPECT_EQ(traj.model, ModelKind::rescaled);
}

TEST(Rescaled, MatchesScaledHamiltonianField) {
  const OdeSystem field = dynamics::hamiltonian_field_system(
      kCanonical, BracketTable::scaled(kCanonical), fields::hamiltonian(kCanonical));
  const Trajectory a = dynamics::integrate_rescaled(kCanonical, kGeneric, 1e-3, 2000);
  const Trajectory b = dynamics::integrate(field, to_vector(kGeneric), {1e-3, 2000, 1, 0, 1});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t n = 0; n < a.samples.size(); ++n) {
    EXPECT_LT((a.samples[n].state - b.samples[n].state).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rescaled, PhysicalTimeIsMonotone) {
  const Trajectory traj = dynamics::integrate_rescaled(kCanonical, kGeneric, 1e-2, 1000);
  for (std::size_t n = 1; n < traj.samples.size(); ++n) {
    const double dt = traj.samples[n].t - traj.samples[n - 1].t;
    EXPECT_GT(dt, 0.0);
    EXPECT_LT(dt, 1e-2);  // mu < 1
  }
}

TEST(Divergence, WeightedVanishesUnweightedDoesNot) {
  oracle::Sampler rng(55);
  double unweighted = 0.0;
  for (int n = 0; n < 100; ++n) {
    const ReducedState s = rng.state();
    EXPECT_LT(std::abs(dynamics::divergence_weighted(kCanonical, s)), 1e-6);
    unweighted = std::max(unweighted, std::abs(dynamics::divergence_unweighted(kCanonical, s)));
  }
  EXPECT_GT(unweighted, 1e-2);
}

}  // namespace
