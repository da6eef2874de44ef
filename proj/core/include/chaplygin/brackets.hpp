#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "chaplygin/model.hpp"

namespace chaplygin {

using Mat6 = Eigen::Matrix<double, 6, 6>;

/// d[l] holds the partial derivative of the coefficient matrix with respect
/// to the coordinate z_l, z = (K1, K2, K3, gamma1, gamma2, gamma3).
struct CoefficientPartials {
  std::array<Mat6, 6> d;
};

enum class BracketVariant { standard, affine, scaled, custom };

std::string_view to_string(BracketVariant v);
std::optional<BracketVariant> parse_variant(std::string_view name);

/// Almost-Poisson bracket on the reduced space, in coordinates:
/// coefficients(s)(i, j) = {z_i, z_j}(s).
///
/// The three built-in tables are the reduced standard bracket, the reduced
/// affine bracket, and the affine bracket multiplied by mu(gamma). Any other
/// evaluator pair can be wrapped as a custom table and fed to the same
/// checks.
struct BracketTable {
  BracketVariant variant = BracketVariant::custom;
  std::function<Mat6(const ReducedState&)> coefficients;
  std::function<CoefficientPartials(const ReducedState&)> partials;

  static BracketTable standard(const SphereParams& p);
  static BracketTable affine(const SphereParams& p);
  static BracketTable scaled(const SphereParams& p);
  static BracketTable of(BracketVariant v, const SphereParams& p);
};

/// A function on the reduced space together with its gradient in the six
/// ambient coordinates.
struct ScalarField {
  std::function<double(const ReducedState&)> value;
  std::function<Vec6(const ReducedState&)> gradient;
};

namespace fields {
ScalarField hamiltonian(const SphereParams& p);
ScalarField half_k_squared();      // J = K.K / 2
ScalarField vertical_momentum();   // K . gamma
ScalarField gamma_norm_squared();  // |gamma|^2
ScalarField coordinate(int index); // z_index, zero-based
}  // namespace fields

namespace brackets {

/// {K_i, K_j} = -c_ijl (K_l + m r^2 (w_l - w3 gamma_l)), {K_i, gamma_j} =
/// -c_ijl gamma_l, {gamma_i, gamma_j} = 0. w is the body angular velocity and
/// w3 its vertical component.
Mat6 standard_coeffs(const SphereParams& p, const ReducedState& s);
/// {K_i, K_j} = -c_ijl (K_l - m r^2 w3 gamma_l).
Mat6 affine_coeffs(const SphereParams& p, const ReducedState& s);
/// mu(gamma) * affine_coeffs.
Mat6 scaled_coeffs(const SphereParams& p, const ReducedState& s);

CoefficientPartials standard_partials(const SphereParams& p, const ReducedState& s);
CoefficientPartials affine_partials(const SphereParams& p, const ReducedState& s);
CoefficientPartials scaled_partials(const SphereParams& p, const ReducedState& s);

/// {F, G}(s) = dF . Lambda(s) dG.
double bracket_eval(const BracketTable& table, const ScalarField& f,
                    const ScalarField& g, const ReducedState& s);

/// X_F with X_F(G) = {G, F}; component i is {z_i, F}.
Vec6 ham_vector_field(const BracketTable& table, const ScalarField& f,
                      const ReducedState& s);

/// Cyclic sum over (i, j, k) of sum_l Lambda_il dLambda_jk/dz_l.
double jacobiator(const BracketTable& table, int i, int j, int k,
                  const ReducedState& s);

/// Same, from already evaluated coefficients and partials.
double jacobiator(const Mat6& lambda, const CoefficientPartials& partials,
                  int i, int j, int k);

struct JacobiatorMax {
  double value = 0.0;
  std::array<int, 3> triple{0, 1, 2};
};

/// Largest |jacobiator| over the 20 triples i < j < k.
JacobiatorMax max_jacobiator(const BracketTable& table, const ReducedState& s);

}  // namespace brackets
}  // namespace chaplygin
