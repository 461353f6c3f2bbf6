#include "axiflow/identity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axiflow {

namespace {

using Vec3 = Eigen::Vector3d;

constexpr double kScaleFloor = 1e-300;

struct Cyl {
  double R, theta, Z;
};

Cyl to_cylindrical(const Vec3& x) { return {std::hypot(x[0], x[1]), std::atan2(x[1], x[0]), x[2]}; }

Vec3 e_theta(double theta) { return {-std::sin(theta), std::cos(theta), 0.0}; }

// G = -grad p in Cartesian components.
Vec3 minus_grad_p(const Field& field, const Vec3& x, double t) {
  const Cyl c = to_cylindrical(x);
  const PressureGradient g = field.pressure_gradient(c.R, c.Z, t);
  return -Vec3(g.dr * std::cos(c.theta), g.dr * std::sin(c.theta), g.dz);
}

// Rate of |u| along the path through x at time t: (u . Du/Dt) / |u|.
double speed_rate_at(const Field& field, const Vec3& x, double t) {
  const Cyl c = to_cylindrical(x);
  const CylVelocity u = field.velocity(c.R, c.Z, t);
  const CylVelocity a = material_acceleration(field, c.R, c.Z, t);
  const double speed = u.norm();
  if (speed == 0.0) throw StagnationError("speed vanishes at the displaced probe");
  return (u.r * a.r + u.theta * a.theta + u.z * a.z) / speed;
}

TrajectoryOptions tight() {
  TrajectoryOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  return o;
}

// Path through x at time t, covering [t - span, t + span].
struct LocalPath {
  Trajectory forward, backward;
  double t;
  Vec3 velocity(double tau) const { return tau >= t ? forward.velocity(tau) : backward.velocity(tau); }
};

LocalPath local_path(const FieldPtr& field, const Vec3& x, double t, double span) {
  const Cyl c = to_cylindrical(x);
  const Seed seed{c.R, c.theta, c.Z};
  auto fw = integrate_trajectory(field, seed, t, t + span, tight());
  auto bw = integrate_trajectory(field, seed, t, t - span, tight());
  if (fw.t_max() < t + span || bw.t_min() > t - span) {
    std::ostringstream os;
    os << "path through the probe leaves the field within " << span << " of t = " << t;
    throw DomainError(os.str());
  }
  return {std::move(fw), std::move(bw), t};
}

IdentityCheck make_check(std::string name, double lhs, const std::array<double, 3>& rhs,
                         const std::array<double, 3>& steps, double extra_scale,
                         const IdentitySteps& opt) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs[0];
  c.steps = steps;
  for (int i = 0; i < 3; ++i) c.residuals[i] = lhs - rhs[i];
  c.absolute = std::abs(c.residuals[0]);
  c.scale = std::max({std::abs(lhs), std::abs(rhs[0]), extra_scale});
  c.relative = c.absolute / std::max(c.scale, kScaleFloor);
  const double d1 = std::abs(c.residuals[0] - c.residuals[1]);
  const double d2 = std::abs(c.residuals[1] - c.residuals[2]);
  const double noise = 1e-10 * std::max(c.scale, kScaleFloor);
  if (d1 > noise || d2 > noise) c.slope = std::log2(d1 / d2);
  c.pass = c.relative < opt.tolerance && (!c.slope || (*c.slope >= opt.slope_lo && *c.slope <= opt.slope_hi));
  return c;
}

double default_space_step(double kappa) { return std::clamp(1e-4 / kappa, 1e-7, 1e-2); }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::degenerate: return "degenerate";
  }
  return "?";
}

IdentityReport check_pressure_identities(const FieldPtr& field, const Trajectory& traj, double t,
                                         const IdentitySteps& opt) {
  if (!field->has_pressure_gradient())
    throw NotCertified("field '" + field->name() + "' has no certified pressure gradient");
  const FrenetSample f = frenet_at_time(traj, t);
  const Vec3 x = f.position;
  const Vec3 G = minus_grad_p(*field, x, t);
  const double u = f.speed;
  const double rate = speed_rate(traj, t);

  IdentityReport rep;
  rep.field = field->name();
  rep.t = t;
  rep.s = traj.at(t).s;
  rep.position = x;
  rep.kappa = f.kappa;
  rep.torsion = f.torsion;
  rep.dkappa_ds = f.dkappa_ds;
  rep.speed = u;
  rep.speed_rate = rate;
  rep.tolerance = opt.tolerance;

  const Cyl c = to_cylindrical(x);
  const CylVelocity acc = material_acceleration(*field, c.R, c.Z, t);
  const double acc_norm = std::sqrt(acc.r * acc.r + acc.theta * acc.theta + acc.z * acc.z);
  rep.time_step = opt.time > 0.0 ? opt.time : 5e-3 * u / std::max(acc_norm, 1e-300);
  if (!std::isfinite(rep.time_step)) rep.time_step = 5e-3;
  rep.space_step = opt.space > 0.0 ? opt.space : default_space_step(f.kappa);

  const double h = rep.time_step;
  const LocalPath path = local_path(field, x, t, h);
  std::array<double, 3> ht{}, hs{}, rate_fd{}, normal_fd{}, dn_F{}, db_F{}, dn_Gt{}, db_Gt{};
  for (int k = 0; k < 3; ++k) {
    ht[k] = h / double(1 << k);
    const Vec3 up = path.velocity(t + ht[k]), um = path.velocity(t - ht[k]);
    rate_fd[k] = (up.norm() - um.norm()) / (2.0 * ht[k]);
    normal_fd[k] = ((up - um) / (2.0 * ht[k])).dot(f.n);

    hs[k] = rep.space_step / double(1 << k);
    auto diff = [&](const Vec3& dir, auto&& fn) {
      return (fn(x + hs[k] * dir) - fn(x - hs[k] * dir)) / (2.0 * hs[k]);
    };
    auto F = [&](const Vec3& y) { return speed_rate_at(*field, y, t); };
    auto Gt = [&](const Vec3& y) { return minus_grad_p(*field, y, t).dot(f.tau); };
    dn_F[k] = diff(f.n, F);
    db_F[k] = diff(f.b, F);
    dn_Gt[k] = diff(f.n, Gt);
    db_Gt[k] = diff(f.b, Gt);
  }

  const double kappa_u2 = f.kappa * u * u;
  const double radial_a = 3.0 * f.kappa * rate;
  const double radial_b = f.dkappa_ds * u * u;
  const double binormal = f.torsion * kappa_u2;
  rep.identities[0] = make_check("tau", G.dot(f.tau), rate_fd, ht, 0.0, opt);
  rep.identities[1] = make_check("n", G.dot(f.n), normal_fd, ht, kappa_u2, opt);
  rep.identities[2] = make_check("rbar", radial_a + radial_b, dn_F, hs,
                                 std::max(std::abs(radial_a), std::abs(radial_b)), opt);
  rep.identities[3] = make_check("zbar", binormal, db_F, hs, 0.0, opt);

  // Partial time derivative of G at the fixed probe point.
  const double k = 1e-3 * h;
  const Vec3 Gdot = (-minus_grad_p(*field, x, t + 2 * k) + 8.0 * minus_grad_p(*field, x, t + k) -
                     8.0 * minus_grad_p(*field, x, t - k) + minus_grad_p(*field, x, t - 2 * k)) /
                    (12.0 * k);
  const double corr_n = Gdot.dot(f.n) / u, corr_b = Gdot.dot(f.b) / u;
  rep.frozen[0] = make_check("frozen_n", radial_a + radial_b - corr_n, dn_Gt, hs,
                             std::max({std::abs(radial_a), std::abs(radial_b), std::abs(corr_n)}), opt);
  rep.frozen[1] = make_check("frozen_b", binormal - corr_b, db_Gt, hs,
                             std::max(std::abs(binormal), std::abs(corr_b)), opt);

  rep.pass = std::all_of(rep.identities.begin(), rep.identities.end(),
                         [](const IdentityCheck& c) { return c.pass; });
  return rep;
}

RotationBalance rotation_balance(const FieldPtr& field, const Trajectory& traj, double t) {
  RotationBalance rb;
  const TrajectoryPoint p = traj.at(t);
  const Domain& dom = field->info().domain;
  const double d = 0.05 * dom.r_max;
  auto span = [](double v, double lo, double hi, double w) {
    std::vector<double> out;
    for (double q : {v - w, v, v + w})
      if (q >= lo && q <= hi) out.push_back(q);
    return out;
  };
  SampleGrid grid;
  grid.r = span(p.R, std::max(kAxisFloor, 0.0), dom.r_max, d);
  grid.z = span(p.Z, dom.z_min, dom.z_max, d);
  grid.t = span(t, dom.t_min, dom.t_max, d);
  rb.certification = certify_euler(*field, grid);
  if (!rb.certification.exact) {
    rb.detail = "not applicable: " + rb.certification.detail;
    return rb;
  }
  rb.applicable = true;

  FrenetSample f;
  try {
    f = frenet_at_time(traj, t);
  } catch (const FrameUndefined& e) {
    rb.degenerate = true;
    rb.detail = std::string("degenerate: ") + e.what();
    return rb;
  }
  const double u = f.speed;
  const double rate = speed_rate(traj, t);
  const Vec3 et = e_theta(p.theta);
  rb.e_theta_n = et.dot(f.n);
  rb.e_theta_b = et.dot(f.b);
  rb.rate_term = f.kappa * rate;
  rb.curvature_term = f.dkappa_ds * u * u;
  rb.torsion_term = f.torsion * f.kappa * u * u;
  rb.balance = 3.0 * rb.e_theta_n * (rb.rate_term + rb.curvature_term) + rb.e_theta_b * rb.torsion_term;
  rb.balance_alternative =
      3.0 * rb.e_theta_n * rb.rate_term + rb.e_theta_n * rb.curvature_term + rb.e_theta_b * rb.torsion_term;
  rb.lower_bound = 1.5 * std::abs(rb.curvature_term) - 3.0 * std::abs(rb.rate_term) - rb.torsion_term;

  // Rotate the probe about the axis and difference the rate of |u| along the
  // re-integrated paths through the rotated points.
  const double step = default_space_step(f.kappa);
  rb.angle_step = step / p.R;
  const CylVelocity acc = material_acceleration(*field, p.R, p.Z, t);
  const double acc_norm = std::sqrt(acc.r * acc.r + acc.theta * acc.theta + acc.z * acc.z);
  double h = 5e-3 * u / std::max(acc_norm, 1e-300);
  if (!std::isfinite(h)) h = 5e-3;
  auto F = [&](double dtheta) {
    const Vec3 x = to_cartesian(p.R, p.theta + dtheta, p.Z);
    const LocalPath lp = local_path(field, x, t, 2.0 * h);
    auto sp = [&](double tau) { return lp.velocity(tau).norm(); };
    return (-sp(t + 2 * h) + 8.0 * sp(t + h) - 8.0 * sp(t - h) + sp(t - 2 * h)) / (12.0 * h);
  };
  rb.angular_derivative = (F(rb.angle_step) - F(-rb.angle_step)) / (2.0 * step);

  rb.scale = std::max({0.5 * std::abs(rb.curvature_term), std::abs(3.0 * rb.e_theta_n * rb.rate_term),
                       std::abs(3.0 * rb.e_theta_n * rb.curvature_term),
                       std::abs(rb.e_theta_b * rb.torsion_term)}) +
             kScaleFloor;
  rb.normalized = std::abs(rb.balance) / rb.scale;
  rb.normalized_alternative = std::abs(rb.balance_alternative) / rb.scale;
  rb.agreement = std::abs(rb.balance - rb.angular_derivative) / rb.scale;
  return rb;
}

KeyInequalities key_inequalities(const FieldPtr& field, const Trajectory& traj, double t,
                                 const ScanParams& params) {
  KeyInequalities k;
  const TrajectoryPoint p = traj.at(t);
  k.u_theta = p.v.theta;
  k.swirl_in_band = k.u_theta >= params.swirl_lo && k.u_theta <= params.swirl_hi;
  k.speed = p.v.norm();
  if (k.u_theta == 0.0) {
    k.detail = "no swirl at the probe";
    return k;
  }
  FrenetSample f;
  try {
    f = frenet_at_time(traj, t);
  } catch (const FrameUndefined& e) {
    k.detail = e.what();
    return k;
  }
  k.speed_rate = speed_rate(traj, t);
  k.kappa = f.kappa;
  k.torsion = f.torsion;
  k.dkappa_ds = f.dkappa_ds;
  const Vec3 et = e_theta(p.theta);
  k.n_e_theta = f.n.dot(et);
  k.b_e_theta = f.b.dot(et);
  const double u2 = k.speed * k.speed;
  k.margins[0] = u2 * std::abs(k.dkappa_ds) / 6.0 - k.kappa * k.speed_rate;
  k.margins[1] = 0.5 * std::abs(k.dkappa_ds) - std::abs(k.kappa * k.torsion * k.b_e_theta);
  k.margins[2] = -0.5 - k.n_e_theta;
  k.lower_margin = k.n_e_theta + 1.0;

  const double kappa_min = kCurvatureFloor / field->info().domain.r_max;
  if (std::abs(k.dkappa_ds) < 1e-8 * std::max(k.kappa * k.kappa, kappa_min * kappa_min)) {
    k.detail = "d_s kappa vanishes at the probe";
    return k;
  }
  const bool ok = k.margins[0] > 0.0 && k.margins[1] > 0.0 && k.margins[2] > 0.0 && k.lower_margin >= 0.0;
  k.verdict = ok ? Verdict::holds : Verdict::fails;
  return k;
}

}  // namespace axiflow
