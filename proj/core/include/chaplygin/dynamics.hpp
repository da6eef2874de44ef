#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "chaplygin/brackets.hpp"
#include "chaplygin/model.hpp"

namespace chaplygin {

using VecX = Eigen::VectorXd;

/// Unreduced configuration on the constraint manifold: attitude g (body to
/// space), contact point (x, y) and contact-point angular momentum K in the
/// body frame.
struct FullState {
  Mat3 g = Mat3::Identity();
  double x = 0.0;
  double y = 0.0;
  Vec3 K = Vec3::Zero();
};

/// Point of T*Q in centre-of-mass variables: body angular momentum M about
/// the centre and the linear momentum (px, py).
struct MultiplierState {
  Mat3 g = Mat3::Identity();
  double x = 0.0;
  double y = 0.0;
  Vec3 M = Vec3::Zero();
  double px = 0.0;
  double py = 0.0;
};

struct FullRhs {
  Mat3 g_dot;
  double x_dot;
  double y_dot;
  Vec3 K_dot;
};

struct MultiplierRhs {
  Mat3 g_dot;
  double x_dot;
  double y_dot;
  Vec3 M_dot;
  double px_dot;
  double py_dot;
  double lambda_x;
  double lambda_y;
  // Largest |d/dt| of the two constraint residuals after the multipliers are
  // applied.
  double residual_rate;
};

enum class ModelKind { reduced, full, multiplier, rescaled };

std::string_view to_string(ModelKind kind);

/// Integration aborted on a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(std::int64_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

/// Flattened ODE on R^n with the hooks the integrator needs.
///
/// Vector layouts:
///   reduced, rescaled: K(3), gamma(3)
///   full:              g row-major(9), x, y, K(3)
///   multiplier:        g row-major(9), x, y, M(3), px, py
struct OdeSystem {
  ModelKind kind = ModelKind::reduced;
  SphereParams params;
  std::function<VecX(const VecX&)> rhs;
  std::function<ReducedState(const VecX&)> project;
  std::function<void(VecX&)> repair;  // gamma/g back onto the manifold
};

struct IntegrationOptions {
  double dt = 1e-3;
  std::int64_t steps = 1;
  std::int64_t sample_stride = 1;
  // Repair interval in steps; 0 disables repair.
  std::int64_t renormalize_every = 0;
  // RK4 substeps per step; values above 1 give a reference solution on the
  // same sampling grid.
  int substeps = 1;
};

struct Sample {
  double t = 0.0;
  double tau = 0.0;  // rescaled time; equals t for unrescaled runs
  VecX state;
  FirstIntegrals integrals{};
};

/// Samples are taken at every multiple of sample_stride, starting at step 0.
/// final_state is always the state after the last step.
struct Trajectory {
  ModelKind model = ModelKind::reduced;
  SphereParams params;
  std::string integrator = "rk4";
  double step = 0.0;
  std::vector<Sample> samples;
  VecX final_state;
};

namespace dynamics {

/// (K x w, gamma x w).
Vec6 reduced_rhs(const SphereParams& p, const ReducedState& s);

FullRhs full_rhs(const SphereParams& p, const FullState& s);

/// Unconstrained Hamilton equations plus the reaction of the two rolling
/// constraints, with multipliers chosen so the constraint residuals stay
/// constant. With constrained == false the multipliers are zero and the
/// sphere moves as a free rigid body.
MultiplierRhs multiplier_rhs(const SphereParams& p, const MultiplierState& s,
                             bool constrained = true);

/// (px - m r ws_2, py + m r ws_1) with ws the space angular velocity.
Eigen::Vector2d constraint_residuals(const SphereParams& p,
                                     const MultiplierState& s);

/// Momenta on the constraint manifold matching the contact-point momentum K.
MultiplierState consistent_multiplier_state(const SphereParams& p,
                                            const FullState& s);

ReducedState project(const FullState& s);
ReducedState project(const SphereParams& p, const MultiplierState& s);

VecX to_vector(const FullState& s);
FullState full_state_from_vector(const VecX& v);
VecX to_vector(const MultiplierState& s);
MultiplierState multiplier_state_from_vector(const VecX& v);

OdeSystem reduced_system(const SphereParams& p);
OdeSystem full_system(const SphereParams& p);
OdeSystem multiplier_system(const SphereParams& p, bool constrained = true);
/// mu(gamma) * reduced_rhs, the equations in rescaled time.
OdeSystem rescaled_system(const SphereParams& p);
/// The Hamiltonian vector field of f with respect to an arbitrary table.
OdeSystem hamiltonian_field_system(const SphereParams& p, BracketTable table,
                                   ScalarField f);

VecX rk4_step(const OdeSystem& sys, const VecX& x, double dt);

/// Fixed-step classical RK4. Throws std::invalid_argument on bad options and
/// IntegrationError on a non-finite state.
Trajectory integrate(const OdeSystem& sys, const VecX& initial,
                     const IntegrationOptions& options);

/// Integrates the rescaled field in tau with step dtau. Physical time is
/// accumulated as the trapezoidal integral of mu(gamma) d tau.
Trajectory integrate_rescaled(const SphereParams& p,
                              const ReducedState& initial, double dtau,
                              std::int64_t steps,
                              IntegrationOptions options = {});

/// Ambient divergence of mu(gamma)^{-1} (K x w, gamma x w) by central
/// differences.
double divergence_weighted(const SphereParams& p, const ReducedState& s,
                           double h = 1e-5);
/// Same without the weight.
double divergence_unweighted(const SphereParams& p, const ReducedState& s,
                             double h = 1e-5);

}  // namespace dynamics
}  // namespace chaplygin
