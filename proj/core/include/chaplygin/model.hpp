#pragma once

#include <Eigen/Core>

#include "chaplygin/so3.hpp"

namespace chaplygin {

/// Inhomogeneous sphere with centre of mass at its geometric centre.
/// SI units: mass in kg, radius in m, principal moments in kg m^2.
struct SphereParams {
  double mass = 1.0;
  double radius = 1.0;
  Vec3 inertia = Vec3(1.0, 2.0, 3.0);

  /// m r^2, the coupling between rolling and spinning.
  double mr2() const { return mass * radius * radius; }

  /// Throws std::invalid_argument unless mass, radius and every principal
  /// moment are finite and strictly positive.
  void validate() const;
};

/// Point of the reduced space R^3 x S^2. gamma is never renormalised
/// implicitly.
struct ReducedState {
  Vec3 K = Vec3::Zero();      // contact-point angular momentum, body frame
  Vec3 gamma = Vec3::UnitZ(); // vertical unit vector, body frame
};

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 to_vector(const ReducedState& s);
ReducedState from_vector(const Vec6& z);

struct DerivedKinematics {
  Vec3 omega_body;
  double omega3_space;
  double Y;
  double mu;
  Mat3 T;
};

struct HamiltonianGradient {
  Vec3 dK;
  Vec3 dgamma;
};

struct FirstIntegrals {
  double H;       // energy
  double J;       // |K|^2 / 2
  double Kgamma;  // K . gamma, vertical angular momentum
  double gnorm;   // |gamma|^2
};

namespace model {

// Tolerance on |gamma| used by the operations that insist on a unit vector.
inline constexpr double kUnitTolerance = 1e-6;

/// A^{-1} with A = I + m r^2 E.
Mat3 a_inverse(const SphereParams& p);

/// Y(gamma) = 1 - m r^2 gamma . A^{-1} gamma. Throws std::domain_error when
/// gamma is not a unit vector within kUnitTolerance.
double y_gamma(const SphereParams& p, const Vec3& gamma);

/// Same expression without the unit-norm check; the smooth extension off
/// S^2 used by finite-difference and ambient-coordinate computations.
double y_ambient(const SphereParams& p, const Vec3& gamma);

/// T(gamma) = A^{-1} + m r^2 / Y (A^{-1} gamma)(A^{-1} gamma)^T, so that
/// omega_body = T(gamma) K.
Mat3 t_matrix(const SphereParams& p, const Vec3& gamma);

Vec3 omega_body(const SphereParams& p, const ReducedState& s);
double omega3_space(const SphereParams& p, const ReducedState& s);

/// K = I omega + m r^2 (omega - (omega . gamma) gamma).
Vec3 k_from_omega(const SphereParams& p, const Vec3& gamma, const Vec3& omega);

double hamiltonian(const SphereParams& p, const ReducedState& s);

/// dH/dK = omega_body and dH/dgamma = m r^2 w3 (omega_body - w3 gamma).
/// The gamma part is the tangential representative; it differs from the
/// ambient derivative by a multiple of gamma.
HamiltonianGradient grad_hamiltonian(const SphereParams& p,
                                     const ReducedState& s);

/// Conformal factor sqrt(Y(gamma)).
double mu(const SphereParams& p, const Vec3& gamma);
double mu_ambient(const SphereParams& p, const Vec3& gamma);

DerivedKinematics kinematics(const SphereParams& p, const ReducedState& s);

FirstIntegrals first_integrals(const SphereParams& p, const ReducedState& s);

}  // namespace model
}  // namespace chaplygin
