#include "chaplygin/model.hpp"

#include <cmath>
#include <stdexcept>

namespace chaplygin {

void SphereParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(mass)) throw std::invalid_argument("mass must be positive");
  if (!positive(radius)) throw std::invalid_argument("radius must be positive");
  for (int i = 0; i < 3; ++i) {
    if (!positive(inertia[i])) {
      throw std::invalid_argument("principal moments of inertia must be positive");
    }
  }
}

Vec6 to_vector(const ReducedState& s) {
  Vec6 z;
  z << s.K, s.gamma;
  return z;
}

ReducedState from_vector(const Vec6& z) {
  return {z.head<3>(), z.tail<3>()};
}

namespace model {

namespace {

Vec3 a_inverse_diagonal(const SphereParams& p) {
  const double mr2 = p.mr2();
  return {1.0 / (p.inertia[0] + mr2), 1.0 / (p.inertia[1] + mr2),
          1.0 / (p.inertia[2] + mr2)};
}

}  // namespace

Mat3 a_inverse(const SphereParams& p) {
  return a_inverse_diagonal(p).asDiagonal();
}

double y_ambient(const SphereParams& p, const Vec3& gamma) {
  const Vec3 a = a_inverse_diagonal(p).cwiseProduct(gamma);
  return 1.0 - p.mr2() * gamma.dot(a);
}

double y_gamma(const SphereParams& p, const Vec3& gamma) {
  if (std::abs(gamma.norm() - 1.0) > kUnitTolerance) {
    throw std::domain_error("y_gamma: gamma is not a unit vector");
  }
  return y_ambient(p, gamma);
}

Mat3 t_matrix(const SphereParams& p, const Vec3& gamma) {
  const Vec3 a = a_inverse_diagonal(p).cwiseProduct(gamma);
  const double y = y_ambient(p, gamma);
  return a_inverse(p) + (p.mr2() / y) * a * a.transpose();
}

Vec3 omega_body(const SphereParams& p, const ReducedState& s) {
  const Vec3 ainv = a_inverse_diagonal(p);
  const Vec3 a = ainv.cwiseProduct(s.gamma);
  const double w3 = s.K.dot(a) / y_ambient(p, s.gamma);
  return ainv.cwiseProduct(s.K) + p.mr2() * w3 * a;
}

double omega3_space(const SphereParams& p, const ReducedState& s) {
  const Vec3 a = a_inverse_diagonal(p).cwiseProduct(s.gamma);
  return s.K.dot(a) / y_ambient(p, s.gamma);
}

Vec3 k_from_omega(const SphereParams& p, const Vec3& gamma, const Vec3& omega) {
  return p.inertia.cwiseProduct(omega) +
         p.mr2() * (omega - omega.dot(gamma) * gamma);
}

double hamiltonian(const SphereParams& p, const ReducedState& s) {
  return 0.5 * s.K.dot(omega_body(p, s));
}

HamiltonianGradient grad_hamiltonian(const SphereParams& p,
                                     const ReducedState& s) {
  const Vec3 w = omega_body(p, s);
  const double w3 = omega3_space(p, s);
  return {w, p.mr2() * w3 * (w - w3 * s.gamma)};
}

double mu_ambient(const SphereParams& p, const Vec3& gamma) {
  return std::sqrt(y_ambient(p, gamma));
}

double mu(const SphereParams& p, const Vec3& gamma) {
  return std::sqrt(y_gamma(p, gamma));
}

DerivedKinematics kinematics(const SphereParams& p, const ReducedState& s) {
  DerivedKinematics d;
  d.T = t_matrix(p, s.gamma);
  d.omega_body = d.T * s.K;
  d.omega3_space = omega3_space(p, s);
  d.Y = y_ambient(p, s.gamma);
  d.mu = std::sqrt(d.Y);
  return d;
}

FirstIntegrals first_integrals(const SphereParams& p, const ReducedState& s) {
  return {hamiltonian(p, s), 0.5 * s.K.squaredNorm(), s.K.dot(s.gamma),
          s.gamma.squaredNorm()};
}

}  // namespace model
}  // namespace chaplygin
