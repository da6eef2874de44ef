#include "chaplygin/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace chaplygin {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::reduced: return "reduced";
    case ModelKind::full: return "full";
    case ModelKind::multiplier: return "multiplier";
    case ModelKind::rescaled: return "rescaled";
  }
  return "reduced";
}

namespace dynamics {

namespace {

Mat3 read_rotation(const VecX& v) {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = v(3 * i + j);
  return g;
}

void write_rotation(const Mat3& g, VecX& v) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = g(i, j);
}

ReducedState reduced_from(const VecX& v) {
  return {v.segment<3>(0), v.segment<3>(3)};
}

void renormalize_gamma(VecX& v) { v.segment<3>(3).normalize(); }

void repair_rotation(VecX& v) {
  write_rotation(so3::reorthonormalize(read_rotation(v)), v);
}

}  // namespace

Vec6 reduced_rhs(const SphereParams& p, const ReducedState& s) {
  const Vec3 w = model::omega_body(p, s);
  Vec6 out;
  out << s.K.cross(w), s.gamma.cross(w);
  return out;
}

FullRhs full_rhs(const SphereParams& p, const FullState& s) {
  const Vec3 w = model::omega_body(p, project(s));
  const Vec3 ws = s.g * w;
  return {s.g * so3::hat(w), p.radius * ws.y(), -p.radius * ws.x(),
          s.K.cross(w)};
}

Eigen::Vector2d constraint_residuals(const SphereParams& p,
                                     const MultiplierState& s) {
  const Vec3 ws = s.g * s.M.cwiseQuotient(p.inertia);
  const double mr = p.mass * p.radius;
  return {s.px - mr * ws.y(), s.py + mr * ws.x()};
}

MultiplierRhs multiplier_rhs(const SphereParams& p, const MultiplierState& s,
                             bool constrained) {
  const double r = p.radius;
  const double mr = p.mass * r;
  const double mr2 = p.mr2();
  const Vec3 iinv = p.inertia.cwiseInverse();
  const Vec3 w = s.M.cwiseProduct(iinv);
  const Vec3 free_torque = s.M.cross(w);

  // Reaction of lambda_x eps_x + lambda_y eps_y in the body co-frame, with
  // eps_x = dx - r g_2j lambda_j and eps_y = dy + r g_1j lambda_j:
  //   M_dot += r g^T (lambda_y e1 - lambda_x e2).
  // Differentiating the residuals gives a 2x2 system for the multipliers.
  double lx = 0.0;
  double ly = 0.0;
  const Mat3 b = s.g * iinv.asDiagonal() * s.g.transpose();
  const Vec3 f = s.g * free_torque.cwiseProduct(iinv);
  if (constrained) {
    const double a11 = 1.0 + mr2 * b(1, 1);
    const double a12 = -mr2 * b(1, 0);
    const double a21 = -mr2 * b(0, 1);
    const double a22 = 1.0 + mr2 * b(0, 0);
    const double r1 = mr * f.y();
    const double r2 = -mr * f.x();
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      throw std::logic_error("multiplier_rhs: singular multiplier system");
    }
    lx = (a22 * r1 - a12 * r2) / det;
    ly = (a11 * r2 - a21 * r1) / det;
  }

  MultiplierRhs out;
  out.g_dot = s.g * so3::hat(w);
  out.x_dot = s.px / p.mass;
  out.y_dot = s.py / p.mass;
  out.M_dot = free_torque + r * s.g.transpose() * Vec3(ly, -lx, 0.0);
  out.px_dot = lx;
  out.py_dot = ly;
  out.lambda_x = lx;
  out.lambda_y = ly;

  const Vec3 ws_dot = s.g * out.M_dot.cwiseProduct(iinv);
  const double rate_x = out.px_dot - mr * ws_dot.y();
  const double rate_y = out.py_dot + mr * ws_dot.x();
  out.residual_rate = std::max(std::abs(rate_x), std::abs(rate_y));
  return out;
}

MultiplierState consistent_multiplier_state(const SphereParams& p,
                                            const FullState& s) {
  const Vec3 w = model::omega_body(p, project(s));
  const Vec3 ws = s.g * w;
  const double mr = p.mass * p.radius;
  return {s.g, s.x, s.y, p.inertia.cwiseProduct(w), mr * ws.y(), -mr * ws.x()};
}

ReducedState project(const FullState& s) {
  return {s.K, so3::poisson_vector(s.g)};
}

ReducedState project(const SphereParams& p, const MultiplierState& s) {
  // K1 = M1 - r py, K2 = M2 + r px, K3 = M3 in space coordinates.
  const Vec3 ms = s.g * s.M;
  const Vec3 ks(ms.x() - p.radius * s.py, ms.y() + p.radius * s.px, ms.z());
  return {s.g.transpose() * ks, so3::poisson_vector(s.g)};
}

VecX to_vector(const FullState& s) {
  VecX v(14);
  write_rotation(s.g, v);
  v(9) = s.x;
  v(10) = s.y;
  v.segment<3>(11) = s.K;
  return v;
}

FullState full_state_from_vector(const VecX& v) {
  if (v.size() != 14) {
    throw std::invalid_argument("full state vector must have 14 entries");
  }
  return {read_rotation(v), v(9), v(10), v.segment<3>(11)};
}

VecX to_vector(const MultiplierState& s) {
  VecX v(16);
  write_rotation(s.g, v);
  v(9) = s.x;
  v(10) = s.y;
  v.segment<3>(11) = s.M;
  v(14) = s.px;
  v(15) = s.py;
  return v;
}

MultiplierState multiplier_state_from_vector(const VecX& v) {
  if (v.size() != 16) {
    throw std::invalid_argument("multiplier state vector must have 16 entries");
  }
  return {read_rotation(v), v(9), v(10), v.segment<3>(11), v(14), v(15)};
}

OdeSystem reduced_system(const SphereParams& p) {
  return {ModelKind::reduced, p,
          [p](const VecX& v) -> VecX { return reduced_rhs(p, reduced_from(v)); },
          reduced_from, renormalize_gamma};
}

OdeSystem rescaled_system(const SphereParams& p) {
  return {ModelKind::rescaled, p,
          [p](const VecX& v) -> VecX {
            const ReducedState s = reduced_from(v);
            return model::mu_ambient(p, s.gamma) * reduced_rhs(p, s);
          },
          reduced_from, renormalize_gamma};
}

OdeSystem full_system(const SphereParams& p) {
  return {ModelKind::full, p,
          [p](const VecX& v) -> VecX {
            const FullRhs d = full_rhs(p, full_state_from_vector(v));
            VecX out(14);
            write_rotation(d.g_dot, out);
            out(9) = d.x_dot;
            out(10) = d.y_dot;
            out.segment<3>(11) = d.K_dot;
            return out;
          },
          [](const VecX& v) { return project(full_state_from_vector(v)); },
          repair_rotation};
}

OdeSystem multiplier_system(const SphereParams& p, bool constrained) {
  return {ModelKind::multiplier, p,
          [p, constrained](const VecX& v) -> VecX {
            const MultiplierRhs d =
                multiplier_rhs(p, multiplier_state_from_vector(v), constrained);
            VecX out(16);
            write_rotation(d.g_dot, out);
            out(9) = d.x_dot;
            out(10) = d.y_dot;
            out.segment<3>(11) = d.M_dot;
            out(14) = d.px_dot;
            out(15) = d.py_dot;
            return out;
          },
          [p](const VecX& v) {
            return project(p, multiplier_state_from_vector(v));
          },
          repair_rotation};
}

OdeSystem hamiltonian_field_system(const SphereParams& p, BracketTable table,
                                   ScalarField f) {
  (void)p;
  return {ModelKind::reduced, p,
          [table = std::move(table), f = std::move(f)](const VecX& v) -> VecX {
            return brackets::ham_vector_field(table, f, reduced_from(v));
          },
          reduced_from, renormalize_gamma};
}

VecX rk4_step(const OdeSystem& sys, const VecX& x, double dt) {
  const VecX k1 = sys.rhs(x);
  const VecX k2 = sys.rhs(x + 0.5 * dt * k1);
  const VecX k3 = sys.rhs(x + 0.5 * dt * k2);
  const VecX k4 = sys.rhs(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

void check_options(const IntegrationOptions& o) {
  if (!(o.dt > 0.0) || !std::isfinite(o.dt)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  if (o.steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
  if (o.sample_stride < 1) {
    throw std::invalid_argument("integrate: sample_stride must be >= 1");
  }
  if (o.renormalize_every < 0) {
    throw std::invalid_argument("integrate: renormalize_every must be >= 0");
  }
  if (o.substeps < 1) throw std::invalid_argument("integrate: substeps must be >= 1");
}

// Shared stepping loop. on_step(n, previous, current) runs after every step.
template <class OnStep>
VecX run(const OdeSystem& sys, VecX x, const IntegrationOptions& o,
         OnStep&& on_step) {
  const double h = o.dt / o.substeps;
  for (std::int64_t n = 1; n <= o.steps; ++n) {
    VecX next = x;
    for (int sub = 0; sub < o.substeps; ++sub) next = rk4_step(sys, next, h);
    if (o.renormalize_every > 0 && n % o.renormalize_every == 0 && sys.repair) {
      sys.repair(next);
    }
    if (!next.allFinite()) {
      throw IntegrationError(
          n, "integration produced a non-finite state at step " + std::to_string(n));
    }
    on_step(n, x, next);
    x = std::move(next);
  }
  return x;
}

}  // namespace

Trajectory integrate(const OdeSystem& sys, const VecX& initial,
                     const IntegrationOptions& options) {
  check_options(options);
  if (!initial.allFinite()) {
    throw IntegrationError(0, "initial state is not finite");
  }
  Trajectory traj;
  traj.model = sys.kind;
  traj.params = sys.params;
  traj.step = options.dt;
  auto record = [&](std::int64_t n, const VecX& x) {
    const double t = static_cast<double>(n) * options.dt;
    traj.samples.push_back(
        {t, t, x, model::first_integrals(sys.params, sys.project(x))});
  };
  record(0, initial);
  traj.final_state = run(sys, initial, options,
                         [&](std::int64_t n, const VecX&, const VecX& x) {
                           if (n % options.sample_stride == 0) record(n, x);
                         });
  return traj;
}

Trajectory integrate_rescaled(const SphereParams& p,
                              const ReducedState& initial, double dtau,
                              std::int64_t steps, IntegrationOptions options) {
  options.dt = dtau;
  options.steps = steps;
  check_options(options);
  const OdeSystem sys = rescaled_system(p);
  const VecX x0 = to_vector(initial);
  if (!x0.allFinite()) throw IntegrationError(0, "initial state is not finite");

  Trajectory traj;
  traj.model = ModelKind::rescaled;
  traj.params = p;
  traj.step = dtau;
  auto mu_of = [&](const VecX& x) {
    return model::mu_ambient(p, x.segment<3>(3));
  };
  double t = 0.0;
  auto record = [&](std::int64_t n, const VecX& x) {
    Sample smp{t, static_cast<double>(n) * dtau, x, {}};
    smp.integrals = model::first_integrals(p, reduced_from(x));
    traj.samples.push_back(std::move(smp));
  };
  record(0, x0);
  traj.final_state =
      run(sys, x0, options, [&](std::int64_t n, const VecX& prev, const VecX& x) {
        t += 0.5 * dtau * (mu_of(prev) + mu_of(x));
        if (n % options.sample_stride == 0) record(n, x);
      });
  return traj;
}

namespace {

template <class Field>
double divergence(const ReducedState& s, double h, Field&& field) {
  const Vec6 z = to_vector(s);
  double div = 0.0;
  for (int l = 0; l < 6; ++l) {
    Vec6 zp = z;
    Vec6 zm = z;
    zp(l) += h;
    zm(l) -= h;
    div += (field(from_vector(zp))(l) - field(from_vector(zm))(l)) / (2.0 * h);
  }
  return div;
}

}  // namespace

double divergence_weighted(const SphereParams& p, const ReducedState& s,
                           double h) {
  return divergence(s, h, [&](const ReducedState& q) -> Vec6 {
    return reduced_rhs(p, q) / model::mu_ambient(p, q.gamma);
  });
}

double divergence_unweighted(const SphereParams& p, const ReducedState& s,
                             double h) {
  return divergence(s, h,
                    [&](const ReducedState& q) { return reduced_rhs(p, q); });
}

}  // namespace dynamics
}  // namespace chaplygin
