#include "chaplygin/brackets.hpp"

#include <cmath>
#include <stdexcept>

namespace chaplygin {

std::string_view to_string(BracketVariant v) {
  switch (v) {
    case BracketVariant::standard: return "standard";
    case BracketVariant::affine: return "affine";
    case BracketVariant::scaled: return "scaled";
    case BracketVariant::custom: return "custom";
  }
  return "custom";
}

std::optional<BracketVariant> parse_variant(std::string_view name) {
  if (name == "standard") return BracketVariant::standard;
  if (name == "affine") return BracketVariant::affine;
  if (name == "scaled") return BracketVariant::scaled;
  return std::nullopt;
}

namespace brackets {

namespace {

// Everything the three tables need at one state, with first derivatives.
// Rows of the 3x6 Jacobians are indexed like the vector, columns by z.
struct Ingredients {
  Vec3 ainv;
  Vec3 a;          // A^{-1} gamma
  double Y;
  double w3;
  Vec3 w;          // body angular velocity
  Eigen::Matrix<double, 1, 6> dw3;
  Eigen::Matrix<double, 3, 6> dw;
  double mu;
  Eigen::Matrix<double, 1, 6> dmu;
};

Ingredients compute(const SphereParams& p, const ReducedState& s) {
  const double mr2 = p.mr2();
  Ingredients in;
  in.ainv = model::a_inverse(p).diagonal();
  in.a = in.ainv.cwiseProduct(s.gamma);
  in.Y = 1.0 - mr2 * s.gamma.dot(in.a);
  in.w3 = s.K.dot(in.a) / in.Y;
  in.w = in.ainv.cwiseProduct(s.K) + mr2 * in.w3 * in.a;

  in.dw3.head<3>() = in.a.transpose() / in.Y;
  in.dw3.tail<3>() =
      (in.ainv.cwiseProduct(s.K) + 2.0 * mr2 * in.w3 * in.a).transpose() / in.Y;

  in.dw.leftCols<3>() = Mat3(in.ainv.asDiagonal()) +
                        mr2 * in.a * in.dw3.head<3>();
  in.dw.rightCols<3>() =
      mr2 * (in.a * in.dw3.tail<3>() + in.w3 * Mat3(in.ainv.asDiagonal()));

  in.mu = std::sqrt(in.Y);
  in.dmu.head<3>().setZero();
  in.dmu.tail<3>() = -mr2 * in.a.transpose() / in.mu;
  return in;
}

// Antisymmetric 6x6 matrix with KK block hat(kk) and K-gamma block hat(kg).
Mat6 assemble(const Vec3& kk, const Vec3& kg) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = so3::hat(kk);
  const Mat3 h = so3::hat(kg);
  m.topRightCorner<3, 3>() = h;
  m.bottomLeftCorner<3, 3>() = -h.transpose();
  return m;
}

Vec3 affine_momentum(const SphereParams& p, const ReducedState& s,
                     const Ingredients& in) {
  return s.K - p.mr2() * in.w3 * s.gamma;
}

Eigen::Matrix<double, 3, 6> affine_momentum_jacobian(const SphereParams& p,
                                                     const ReducedState& s,
                                                     const Ingredients& in) {
  Eigen::Matrix<double, 3, 6> d;
  d.leftCols<3>() = Mat3::Identity();
  d.rightCols<3>() = -p.mr2() * in.w3 * Mat3::Identity();
  d -= p.mr2() * s.gamma * in.dw3;
  return d;
}

CoefficientPartials partials_from(const Eigen::Matrix<double, 3, 6>& dkk) {
  CoefficientPartials out;
  for (int l = 0; l < 6; ++l) {
    const Vec3 dkg = l < 3 ? Vec3::Zero() : Vec3(Vec3::Unit(l - 3));
    out.d[l] = assemble(dkk.col(l), dkg);
  }
  return out;
}

}  // namespace

Mat6 standard_coeffs(const SphereParams& p, const ReducedState& s) {
  const Ingredients in = compute(p, s);
  return assemble(affine_momentum(p, s, in) + p.mr2() * in.w, s.gamma);
}

Mat6 affine_coeffs(const SphereParams& p, const ReducedState& s) {
  const Ingredients in = compute(p, s);
  return assemble(affine_momentum(p, s, in), s.gamma);
}

Mat6 scaled_coeffs(const SphereParams& p, const ReducedState& s) {
  const Ingredients in = compute(p, s);
  return in.mu * assemble(affine_momentum(p, s, in), s.gamma);
}

CoefficientPartials standard_partials(const SphereParams& p,
                                      const ReducedState& s) {
  const Ingredients in = compute(p, s);
  return partials_from(affine_momentum_jacobian(p, s, in) + p.mr2() * in.dw);
}

CoefficientPartials affine_partials(const SphereParams& p,
                                    const ReducedState& s) {
  const Ingredients in = compute(p, s);
  return partials_from(affine_momentum_jacobian(p, s, in));
}

CoefficientPartials scaled_partials(const SphereParams& p,
                                    const ReducedState& s) {
  const Ingredients in = compute(p, s);
  const Mat6 base = assemble(affine_momentum(p, s, in), s.gamma);
  CoefficientPartials out = partials_from(affine_momentum_jacobian(p, s, in));
  for (int l = 0; l < 6; ++l) {
    out.d[l] = in.mu * out.d[l] + in.dmu(l) * base;
  }
  return out;
}

double bracket_eval(const BracketTable& table, const ScalarField& f,
                    const ScalarField& g, const ReducedState& s) {
  return f.gradient(s).dot(table.coefficients(s) * g.gradient(s));
}

Vec6 ham_vector_field(const BracketTable& table, const ScalarField& f,
                      const ReducedState& s) {
  return table.coefficients(s) * f.gradient(s);
}

double jacobiator(const Mat6& lambda, const CoefficientPartials& partials,
                  int i, int j, int k) {
  auto term = [&](int a, int b, int c) {
    double sum = 0.0;
    for (int l = 0; l < 6; ++l) sum += lambda(a, l) * partials.d[l](b, c);
    return sum;
  };
  return term(i, j, k) + term(j, k, i) + term(k, i, j);
}

double jacobiator(const BracketTable& table, int i, int j, int k,
                  const ReducedState& s) {
  for (int idx : {i, j, k}) {
    if (idx < 0 || idx > 5) {
      throw std::out_of_range("jacobiator: coordinate index outside 0..5");
    }
  }
  return jacobiator(table.coefficients(s), table.partials(s), i, j, k);
}

JacobiatorMax max_jacobiator(const BracketTable& table, const ReducedState& s) {
  const Mat6 lambda = table.coefficients(s);
  const CoefficientPartials partials = table.partials(s);
  JacobiatorMax best;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      for (int k = j + 1; k < 6; ++k) {
        const double v = std::abs(jacobiator(lambda, partials, i, j, k));
        if (v > best.value) best = {v, {i, j, k}};
      }
    }
  }
  return best;
}

}  // namespace brackets

BracketTable BracketTable::standard(const SphereParams& p) {
  return {BracketVariant::standard,
          [p](const ReducedState& s) { return brackets::standard_coeffs(p, s); },
          [p](const ReducedState& s) { return brackets::standard_partials(p, s); }};
}

BracketTable BracketTable::affine(const SphereParams& p) {
  return {BracketVariant::affine,
          [p](const ReducedState& s) { return brackets::affine_coeffs(p, s); },
          [p](const ReducedState& s) { return brackets::affine_partials(p, s); }};
}

BracketTable BracketTable::scaled(const SphereParams& p) {
  return {BracketVariant::scaled,
          [p](const ReducedState& s) { return brackets::scaled_coeffs(p, s); },
          [p](const ReducedState& s) { return brackets::scaled_partials(p, s); }};
}

BracketTable BracketTable::of(BracketVariant v, const SphereParams& p) {
  switch (v) {
    case BracketVariant::standard: return standard(p);
    case BracketVariant::affine: return affine(p);
    case BracketVariant::scaled: return scaled(p);
    case BracketVariant::custom: break;
  }
  throw std::invalid_argument("BracketTable::of: no built-in custom table");
}

namespace fields {

ScalarField hamiltonian(const SphereParams& p) {
  return {[p](const ReducedState& s) { return model::hamiltonian(p, s); },
          [p](const ReducedState& s) {
            const HamiltonianGradient g = model::grad_hamiltonian(p, s);
            Vec6 out;
            out << g.dK, g.dgamma;
            return out;
          }};
}

ScalarField half_k_squared() {
  return {[](const ReducedState& s) { return 0.5 * s.K.squaredNorm(); },
          [](const ReducedState& s) {
            Vec6 out;
            out << s.K, Vec3::Zero();
            return out;
          }};
}

ScalarField vertical_momentum() {
  return {[](const ReducedState& s) { return s.K.dot(s.gamma); },
          [](const ReducedState& s) {
            Vec6 out;
            out << s.gamma, s.K;
            return out;
          }};
}

ScalarField gamma_norm_squared() {
  return {[](const ReducedState& s) { return s.gamma.squaredNorm(); },
          [](const ReducedState& s) {
            Vec6 out;
            out << Vec3::Zero(), 2.0 * s.gamma;
            return out;
          }};
}

ScalarField coordinate(int index) {
  if (index < 0 || index > 5) {
    throw std::out_of_range("coordinate: index outside 0..5");
  }
  return {[index](const ReducedState& s) { return to_vector(s)(index); },
          [index](const ReducedState&) { return Vec6(Vec6::Unit(index)); }};
}

}  // namespace fields
}  // namespace chaplygin
