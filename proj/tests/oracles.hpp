#pragma once

// Independent reference computations. Nothing here calls into the library's
// own formulas for omega, the bracket tables or their partials: every value
// is rebuilt from the definitions (linear solves, loops over the structure
// constants, finite differences, SVD).

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "chaplygin/brackets.hpp"
#include "chaplygin/model.hpp"
#include "chaplygin/so3.hpp"

namespace oracle {

using chaplygin::Mat3;
using chaplygin::Mat6;
using chaplygin::ReducedState;
using chaplygin::SphereParams;
using chaplygin::Vec3;
using chaplygin::Vec6;

inline int eps(int i, int j, int k) {
  // Parity of the permutation, by counting inversions.
  if (i == j || j == k || i == k) return 0;
  int inversions = (i > j) + (i > k) + (j > k);
  return inversions % 2 == 0 ? 1 : -1;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i] += eps(i, j, k) * a[j] * b[k];
  return out;
}

/// omega from K = I w + m r^2 (w - (w.gamma) gamma), as a 3x3 linear solve.
/// Valid off the sphere as well, using the same expression.
inline Vec3 omega(const SphereParams& p, const Vec3& K, const Vec3& gamma) {
  Mat3 M = p.inertia.asDiagonal();
  M += p.mr2() * (Mat3::Identity() - gamma * gamma.transpose());
  return M.fullPivLu().solve(K);
}

inline double energy(const SphereParams& p, const Vec3& K, const Vec3& gamma) {
  return 0.5 * K.dot(omega(p, K, gamma));
}

/// Coefficient tables written entry by entry from the structure constants.
/// which: 0 standard, 1 affine, 2 scaled.
inline Mat6 table(const SphereParams& p, const Vec3& K, const Vec3& gamma,
                  int which) {
  const Vec3 w = omega(p, K, gamma);
  const double w3 = w.dot(gamma);
  Vec3 P;
  if (which == 0) {
    P = K + p.mr2() * (w - w3 * gamma);
  } else {
    P = K - p.mr2() * w3 * gamma;
  }
  Mat6 L = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int l = 0; l < 3; ++l) {
        L(i, j) -= eps(i, j, l) * P[l];
        L(i, 3 + j) -= eps(i, j, l) * gamma[l];
        L(3 + i, j) -= eps(i, j, l) * gamma[l];
      }
    }
  }
  if (which == 2) {
    const Mat3 A = p.inertia.asDiagonal();
    const Mat3 Ainv = (A + p.mr2() * Mat3::Identity()).inverse();
    L *= std::sqrt(1.0 - p.mr2() * gamma.dot(Ainv * gamma));
  }
  return L;
}

inline Mat6 table(const SphereParams& p, const ReducedState& s, int which) {
  return table(p, s.K, s.gamma, which);
}

/// Central-difference partials of an arbitrary table, step h.
template <class Table>
std::array<Mat6, 6> fd_partials(const Table& f, const ReducedState& s,
                                double h = 1e-6) {
  std::array<Mat6, 6> d;
  Vec6 z = chaplygin::to_vector(s);
  for (int l = 0; l < 6; ++l) {
    Vec6 zp = z, zm = z;
    zp[l] += h;
    zm[l] -= h;
    d[l] = (f(chaplygin::from_vector(zp)) - f(chaplygin::from_vector(zm))) /
           (2.0 * h);
  }
  return d;
}

/// Jacobiator from finite-difference partials, cyclic sum written out.
template <class Table>
double fd_jacobiator(const Table& f, const ReducedState& s, int i, int j, int k,
                     double h = 1e-5) {
  const Mat6 L = f(s);
  const auto d = fd_partials(f, s, h);
  double sum = 0.0;
  for (int l = 0; l < 6; ++l) {
    sum += L(i, l) * d[l](j, k) + L(j, l) * d[l](k, i) + L(k, l) * d[l](i, j);
  }
  return sum;
}

template <class Table>
double fd_max_jacobiator(const Table& f, const ReducedState& s,
                         double h = 1e-5) {
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      for (int k = j + 1; k < 6; ++k)
        worst = std::max(worst, std::abs(fd_jacobiator(f, s, i, j, k, h)));
  return worst;
}

/// Orthogonal polar factor through the SVD.
inline Mat3 polar(const Mat3& g) {
  Eigen::JacobiSVD<Mat3> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Coefficients of the one-form alpha = gamma . dK + (K + m r^2 w) . dgamma
/// in the six coordinates.
inline Vec6 alpha(const SphereParams& p, const Vec6& z) {
  const Vec3 K = z.head<3>();
  const Vec3 g = z.tail<3>();
  Vec6 a;
  a << g, K + p.mr2() * omega(p, K, g);
  return a;
}

/// d(alpha)(U, V) with the Jacobian of alpha by central differences.
inline double d_alpha(const SphereParams& p, const Vec6& z, const Vec6& U,
                      const Vec6& V, double h = 1e-6) {
  Mat6 D;  // D(m, l) = d alpha_m / d z_l
  for (int l = 0; l < 6; ++l) {
    Vec6 zp = z, zm = z;
    zp[l] += h;
    zm[l] -= h;
    D.col(l) = (alpha(p, zp) - alpha(p, zm)) / (2.0 * h);
  }
  const Mat6 curl = D.transpose() - D;  // (l, m): d_l a_m - d_m a_l
  return U.dot(curl * V);
}

/// Fixed seeded sampler used by the property tests.
class Sampler {
 public:
  explicit Sampler(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Vec3 box(double half) {
    return Vec3(uniform(-half, half), uniform(-half, half), uniform(-half, half));
  }
  Vec3 unit() {
    std::normal_distribution<double> n;
    Vec3 v(n(rng_), n(rng_), n(rng_));
    return v.normalized();
  }
  ReducedState state(double half = 3.0) { return {box(half), unit()}; }
  Mat3 rotation() { return chaplygin::so3::exp_rotation(box(3.0)); }

 private:
  std::mt19937 rng_;
};

}  // namespace oracle
