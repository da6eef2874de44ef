#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace chaplygin {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace so3 {

/// Skew-symmetric matrix of v, so that hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Reads the (2,1), (0,2) and (1,0) entries; the symmetric
/// part of the argument is ignored.
Vec3 unhat(const Mat3& m);

/// Structure constants of so(3) in the basis e1, e2, e3: +1 on cyclic
/// permutations of (0, 1, 2), -1 on anticyclic ones, 0 on repeated indices.
/// Indices are zero-based; throws std::out_of_range outside {0, 1, 2}.
int levi_civita(int i, int j, int k);

/// Matrix exponential of hat(v) (Rodrigues). Falls back to the truncated
/// series when |v| < 1e-8.
Mat3 exp_rotation(const Vec3& v);

/// Closest rotation in the Frobenius norm (orthogonal polar factor).
/// Throws std::domain_error if g is farther than 0.1 from SO(3) or has
/// non-positive determinant.
Mat3 reorthonormalize(const Mat3& g);

/// max(|g^T g - E|_F, |det g - 1|).
double orthonormality_defect(const Mat3& g);

/// Vertical unit vector in body coordinates: the third row of g.
Vec3 poisson_vector(const Mat3& g);

/// Rotation about e3 by angle theta.
Mat3 rotation_about_e3(double theta);

/// Some rotation g whose third row is the unit vector gamma.
Mat3 rotation_with_poisson_vector(const Vec3& gamma);

}  // namespace so3
}  // namespace chaplygin
