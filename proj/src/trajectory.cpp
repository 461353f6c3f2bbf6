#include "axiflow/trajectory.hpp"

#include <algorithm>
#include <sstream>

namespace axiflow {

namespace {

enum RejectCode { kAxisCode = 1, kDomainCode = 2, kStagnationCode = 3 };

TrajectoryStatus status_from_code(int code) {
  switch (code) {
    case kAxisCode: return TrajectoryStatus::axis_hit;
    case kStagnationCode: return TrajectoryStatus::stagnation;
    default: return TrajectoryStatus::left_domain;
  }
}

// Root of a monotone function of t inside one dense step, by bisection.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Solves component `idx` of the dense output equal to `target` (monotone in t).
double invert_component(const DenseSolution<4>& dense, int idx, double target) {
  const auto& steps = dense.steps();
  if (steps.empty()) throw RangeError("trajectory has no extent");
  auto value_at = [&](double t) { return dense.state(t)[idx]; };
  const double a = value_at(dense.t_min()), b = value_at(dense.t_max());
  const double lo_v = std::min(a, b), hi_v = std::max(a, b);
  const double slack = 1e-12 * std::max(1.0, std::abs(target));
  if (target < lo_v - slack || target > hi_v + slack) {
    std::ostringstream os;
    os << "value " << target << " outside the covered range [" << lo_v << ", " << hi_v << "]";
    throw RangeError(os.str());
  }
  if (target <= lo_v) return a <= b ? dense.t_min() : dense.t_max();
  if (target >= hi_v) return a <= b ? dense.t_max() : dense.t_min();
  // Locate the step whose end values bracket the target.
  for (const auto& st : steps) {
    const double tl = st.lo(), th = std::min(st.hi(), dense.t_max());
    const double vl = st.state(tl)[idx], vh = st.state(th)[idx];
    if ((vl - target) * (vh - target) <= 0.0)
      return bisect([&](double t) { return st.state(t)[idx] - target; }, tl, th);
  }
  throw RangeError("value not bracketed by any step");
}

}  // namespace

const char* to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::left_domain: return "left_domain";
    case TrajectoryStatus::axis_hit: return "axis_hit";
    case TrajectoryStatus::stagnation: return "stagnation";
  }
  return "unknown";
}

Eigen::Vector3d to_cartesian(double R, double theta, double Z) {
  return {R * std::cos(theta), R * std::sin(theta), Z};
}

Eigen::Vector3d to_cartesian(const CylVelocity& v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {v.r * c - v.theta * s, v.r * s + v.theta * c, v.z};
}

Trajectory::Trajectory(FieldPtr field, Seed seed, double t_seed, TrajectoryOptions options,
                       DenseSolution<4> dense, TrajectoryStatus status, std::string detail)
    : field_(std::move(field)),
      seed_(seed),
      t_seed_(t_seed),
      options_(options),
      dense_(std::move(dense)),
      status_(status),
      detail_(std::move(detail)) {}

TrajectoryPoint Trajectory::at(double t) const {
  const State<4> y = dense_.state(t);
  TrajectoryPoint p;
  p.t = t;
  p.R = y[0];
  p.theta = y[1];
  p.Z = y[2];
  p.s = y[3];
  p.v = field_->velocity(std::min(p.R, field_->info().domain.r_max), p.Z, t);
  return p;
}

Eigen::Vector3d Trajectory::position(double t) const {
  const State<4> y = dense_.state(t);
  return to_cartesian(y[0], y[1], y[2]);
}

Eigen::Vector3d Trajectory::velocity(double t) const {
  const TrajectoryPoint p = at(t);
  return to_cartesian(p.v, p.theta);
}

std::vector<double> Trajectory::node_times() const {
  std::vector<double> ts;
  for (const auto& st : dense_.steps()) ts.push_back(st.t0);
  ts.push_back(dense_.t_stop());
  std::sort(ts.begin(), ts.end());
  return ts;
}

Trajectory integrate_trajectory(FieldPtr field_ptr, const Seed& seed, double t0, double t1,
                                const TrajectoryOptions& options) {
  if (!field_ptr) throw ValidationError("trajectory needs a field");
  const Field& field = *field_ptr;
  field.check_domain(seed.r, seed.z, t0);
  if (!(seed.r > 0.0)) throw DomainError("seed lies on the axis; the swirl angle is undefined there");
  const CylVelocity v0 = field.velocity(seed.r, seed.z, t0);
  if (v0.norm() < options.speed_floor) {
    std::ostringstream os;
    os << "speed vanishes at the seed (|u| = " << v0.norm() << " at t = " << t0 << ")";
    throw StagnationError(os.str());
  }

  const Domain& dom = field.info().domain;
  const double floor = options.speed_floor;
  auto rhs = [&](double t, const State<4>& y) -> State<4> {
    const double R = y[0], Z = y[2];
    if (!(R > 0.0)) throw StepRejected(kAxisCode, "trajectory reached the axis");
    if (!field.contains(R, Z, t)) {
      std::ostringstream os;
      os << "trajectory left the domain at (R, Z, t) = (" << R << ", " << Z << ", " << t << ")";
      throw StepRejected(kDomainCode, os.str());
    }
    const CylVelocity v = field.velocity(R, Z, t);
    const double sp = v.norm();
    if (sp < floor) throw StepRejected(kStagnationCode, "speed fell below the stagnation floor");
    return {v.r, v.theta / R, v.z, sp};
  };

  const double r_wall = dom.r_max * (1.0 + 1e-9);
  std::vector<Guard<4>> guards = {
      [&](double, const State<4>& y) { return y[0] - 1e-14 * dom.r_max; },
      [&](double, const State<4>& y) { return r_wall - y[0]; },
      [&](double, const State<4>& y) { return y[2] - dom.z_min; },
      [&](double, const State<4>& y) { return dom.z_max - y[2]; },
      [&](double t, const State<4>&) { return std::min(t - dom.t_min, dom.t_max - t); },
      [&](double t, const State<4>& y) {
        if (!field.contains(y[0], y[2], t) || !(y[0] > 0.0)) return 1.0;
        return field.velocity(y[0], y[2], t).norm() - floor;
      },
  };

  OdeOptions ode;
  ode.rel_tol = options.rel_tol;
  ode.abs_tol = options.abs_tol;
  ode.max_steps = options.max_steps;
  auto res = integrate_dopri5<4>(rhs, t0, State<4>{seed.r, seed.theta, seed.z, 0.0}, t1, ode, guards);

  TrajectoryStatus status = TrajectoryStatus::completed;
  std::string detail;
  if (res.halt == OdeHalt::guard) {
    status = res.code == 0 ? TrajectoryStatus::axis_hit
             : res.code == 5 ? TrajectoryStatus::stagnation
                             : TrajectoryStatus::left_domain;
    std::ostringstream os;
    os << to_string(status) << " at t = " << res.t_end;
    detail = os.str();
  } else if (res.halt == OdeHalt::rejected) {
    status = status_from_code(res.code);
    std::ostringstream os;
    os << res.reason << " (halted at t = " << res.t_end << ")";
    detail = os.str();
  }
  return Trajectory(field_ptr, seed, t0, options, std::move(res.solution), status, detail);
}

// ---------------------------------------------------------------------------

std::array<Series<4>, 3> PathSeries::cartesian() const {
  return {R * cos(theta), R * sin(theta), Z};
}

PathSeries path_series(const Field& field, double R, double theta, double Z, double t) {
  using S = Series<4>;
  const VelocityJet j = field.jet(R, Z, t);
  const S h = S::variable(0.0);
  PathSeries ps{S(R), S(theta), S(Z), S(), S(), S()};
  // Picard iteration; each pass fixes one more order of the positions.
  for (int it = 0; it < 5; ++it) {
    const S dr = ps.R - R, dz = ps.Z - Z;
    ps.v_r = along(j.r, dr, dz, h);
    ps.v_theta = along(j.theta, dr, dz, h);
    ps.v_z = along(j.z, dr, dz, h);
    const S R_next = integrate(ps.v_r, R);
    ps.theta = integrate(ps.v_theta / ps.R, theta);
    ps.Z = integrate(ps.v_z, Z);
    ps.R = R_next;
  }
  return ps;
}

double speed_rate(const Trajectory& traj, double t) {
  const TrajectoryPoint p = traj.at(t);
  const PathSeries ps = path_series(traj.field(), p.R, p.theta, p.Z, t);
  const double speed = p.v.norm();
  if (speed == 0.0) throw StagnationError("speed vanishes at t = " + std::to_string(t));
  return (p.v.r * ps.v_r[1] + p.v.theta * ps.v_theta[1] + p.v.z * ps.v_z[1]) / speed;
}

// ---------------------------------------------------------------------------

ArcLengthTrajectory::ArcLengthTrajectory(Trajectory traj) : traj_(std::move(traj)) {
  const double a = traj_.dense().state(traj_.t_min())[3];
  const double b = traj_.dense().state(traj_.t_max())[3];
  s_min_ = std::min(a, b);
  s_max_ = std::max(a, b);
}

double ArcLengthTrajectory::s_of_t(double t) const { return traj_.dense().state(t)[3]; }

double ArcLengthTrajectory::t_of_s(double s) const { return invert_component(traj_.dense(), 3, s); }

Eigen::Vector3d ArcLengthTrajectory::position(double s) const { return traj_.position(t_of_s(s)); }

Eigen::Vector3d ArcLengthTrajectory::tangent(double s) const {
  const Eigen::Vector3d u = traj_.velocity(t_of_s(s));
  return u / u.norm();
}

ArcLengthTrajectory reparametrize_arclength(const Trajectory& traj) {
  const double floor = traj.options().speed_floor;
  for (const auto& st : traj.dense().steps()) {
    for (int k = 0; k <= 4; ++k) {
      const double t = std::clamp(st.t0 + st.h * k / 4.0, traj.t_min(), traj.t_max());
      const double sp = traj.at(t).v.norm();
      if (sp < floor) {
        std::ostringstream os;
        os << "speed vanishes along the trajectory at t = " << t << " (|u| = " << sp << ")";
        throw StagnationError(os.str());
      }
    }
  }
  return ArcLengthTrajectory(traj);
}

// ---------------------------------------------------------------------------

AxisLengthView::AxisLengthView(Trajectory traj) : traj_(std::move(traj)) {
  const double a = traj_.dense().state(traj_.t_min())[2];
  const double b = traj_.dense().state(traj_.t_max())[2];
  z_min_ = std::min(a, b);
  z_max_ = std::max(a, b);
}

double AxisLengthView::t_of_z(double z) const { return invert_component(traj_.dense(), 2, z); }

AxisSample AxisLengthView::at(double z) const {
  const double t = t_of_z(z);
  const TrajectoryPoint p = traj_.at(t);
  if (!(p.v.z > 0.0)) {
    std::ostringstream os;
    os << "v_z = " << p.v.z << " at t = " << t << "; the axial parametrization needs v_z > 0";
    throw UnilateralViolation(os.str());
  }
  const PathSeries ps = path_series(traj_.field(), p.R, p.theta, p.Z, t);
  // Invert Z(t) to get the time increment as a series in the axial increment.
  const Series<4> h = revert(ps.Z - p.Z);
  const Series<4> r = substitute(ps.R, h);
  const Series<4> th = substitute(ps.theta, h);
  AxisSample out;
  out.z = z;
  for (int k = 0; k < 4; ++k) {
    out.r[k] = r.derivative(k);
    out.theta[k] = th.derivative(k);
    out.time[k] = h.derivative(k);
  }
  out.time[0] = t;
  out.v = p.v;
  const Series<4> vz = substitute(ps.v_z, h);
  out.dz_vz = vz.derivative(1);
  out.dzz_vz = vz.derivative(2);
  return out;
}

AxisSample AxisLengthView::at_finite_difference(double z, double step) const {
  const double noise = std::max(std::numeric_limits<double>::epsilon(), traj_.options().rel_tol);
  const double h = step > 0.0 ? step : std::pow(noise, 1.0 / 7.0) * traj_.field().info().domain.r_max;
  if (z - 3 * h < z_min_ || z + 3 * h > z_max_) {
    std::ostringstream os;
    os << "difference stencil around z = " << z << " leaves the covered range [" << z_min_
       << ", " << z_max_ << "]";
    throw RangeError(os.str());
  }
  std::array<std::array<double, 7>, 3> f{};  // R, Theta, t at z + k h, k = -3..3
  for (int k = -3; k <= 3; ++k) {
    const double t = t_of_z(z + k * h);
    const State<4> y = traj_.dense().state(t);
    f[0][k + 3] = y[0];
    f[1][k + 3] = y[1];
    f[2][k + 3] = t;
  }
  auto d1 = [&](const std::array<double, 7>& v) {
    return (-v[0] + 9 * v[1] - 45 * v[2] + 45 * v[4] - 9 * v[5] + v[6]) / (60 * h);
  };
  auto d2 = [&](const std::array<double, 7>& v) {
    return (2 * v[0] - 27 * v[1] + 270 * v[2] - 490 * v[3] + 270 * v[4] - 27 * v[5] + 2 * v[6]) /
           (180 * h * h);
  };
  auto d3 = [&](const std::array<double, 7>& v) {
    return (v[0] - 8 * v[1] + 13 * v[2] - 13 * v[4] + 8 * v[5] - v[6]) / (8 * h * h * h);
  };
  AxisSample out;
  out.z = z;
  std::array<std::array<double, 4>*, 3> dst = {&out.r, &out.theta, &out.time};
  for (int i = 0; i < 3; ++i) *dst[i] = {f[i][3], d1(f[i]), d2(f[i]), d3(f[i])};
  return out;
}

AxisLengthView axis_length_view(const Trajectory& traj) {
  for (const auto& st : traj.dense().steps()) {
    for (int k = 0; k <= 2; ++k) {
      const double t = std::clamp(st.t0 + st.h * k / 2.0, traj.t_min(), traj.t_max());
      const TrajectoryPoint p = traj.at(t);
      if (!(p.v.z > 0.0)) {
        std::ostringstream os;
        os << "v_z = " << p.v.z << " <= 0 at t = " << t << " (R = " << p.R << ", Z = " << p.Z
           << "); the axial parametrization needs v_z > 0";
        throw UnilateralViolation(os.str());
      }
    }
  }
  if (traj.dense().steps().empty()) throw RangeError("trajectory has no extent");
  return AxisLengthView(traj);
}

}  // namespace axiflow
