#include "chaplygin/so3.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace chaplygin::so3 {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 unhat(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

int levi_civita(int i, int j, int k) {
  auto valid = [](int n) { return n >= 0 && n <= 2; };
  if (!valid(i) || !valid(j) || !valid(k)) {
    throw std::out_of_range("levi_civita: index outside {0,1,2}");
  }
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

Mat3 exp_rotation(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 k = hat(v);
  double a;
  double b;
  if (theta < 1e-8) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * k + b * k * k;
}

Mat3 reorthonormalize(const Mat3& g) {
  if (!g.allFinite() || g.determinant() <= 0.0) {
    throw std::domain_error("reorthonormalize: matrix is not near SO(3)");
  }
  // Newton iteration for the orthogonal polar factor, X <- (X + X^-T) / 2.
  Mat3 x = g;
  for (int it = 0; it < 50; ++it) {
    const Mat3 next = 0.5 * (x + x.inverse().transpose());
    const double change = (next - x).norm();
    x = next;
    if (change < 1e-15) break;
  }
  if ((x - g).norm() > 0.1) {
    throw std::domain_error("reorthonormalize: matrix is not near SO(3)");
  }
  return x;
}

double orthonormality_defect(const Mat3& g) {
  return std::max((g.transpose() * g - Mat3::Identity()).norm(),
                  std::abs(g.determinant() - 1.0));
}

Vec3 poisson_vector(const Mat3& g) { return g.row(2).transpose(); }

Mat3 rotation_about_e3(double theta) {
  return exp_rotation(Vec3(0.0, 0.0, theta));
}

Mat3 rotation_with_poisson_vector(const Vec3& gamma) {
  const Vec3 u = gamma.normalized();
  // Rotate e3 onto u; g maps body to space, so g^T e3 = u means g^T is that
  // rotation.
  const Vec3 e3 = Vec3::UnitZ();
  const Vec3 axis = e3.cross(u);
  const double s = axis.norm();
  const double c = e3.dot(u);
  Mat3 r;
  if (s < 1e-12) {
    r = c > 0.0 ? Mat3::Identity() : exp_rotation(Vec3(M_PI, 0.0, 0.0));
  } else {
    r = exp_rotation(axis / s * std::atan2(s, c));
  }
  return r.transpose();
}

}  // namespace chaplygin::so3
