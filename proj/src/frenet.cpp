#include "axiflow/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace axiflow {

namespace {

using Vec3 = Eigen::Vector3d;
using S4 = Series<4>;

template <class T>
std::array<T, 3> cross(const std::array<T, 3>& a, const std::array<T, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
T dot(const std::array<T, 3>& a, const std::array<T, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 derivative_vector(const std::array<S4, 3>& c, int k) {
  return {c[0].derivative(k), c[1].derivative(k), c[2].derivative(k)};
}

FrenetSample frame_at(const Trajectory& traj, double t) {
  const TrajectoryPoint p = traj.at(t);
  const PathSeries ps = path_series(traj.field(), p.R, p.theta, p.Z, t);
  const auto c = ps.cartesian();
  const Vec3 d1 = derivative_vector(c, 1), d2 = derivative_vector(c, 2), d3 = derivative_vector(c, 3);

  FrenetSample f;
  f.t = t;
  f.s = p.s;
  f.position = to_cartesian(p.R, p.theta, p.Z);
  f.speed = d1.norm();
  if (f.speed == 0.0) throw StagnationError("speed vanishes at t = " + std::to_string(t));
  const Vec3 cr = d1.cross(d2);
  const double cn = cr.norm();
  f.kappa = cn / (f.speed * f.speed * f.speed);
  f.tau = d1 / f.speed;
  const double floor = kCurvatureFloor / traj.field().info().domain.r_max;
  if (f.kappa < floor) {
    std::ostringstream os;
    os << "curvature " << f.kappa << " below the floor " << floor << " at t = " << t
       << "; normal and binormal are undefined";
    throw FrameUndefined(os.str());
  }
  f.n = (d2 - d2.dot(f.tau) * f.tau).normalized();
  f.raw_torsion = cr.dot(d3) / (cn * cn);
  const Vec3 b_std = f.tau.cross(f.n);
  if (f.raw_torsion < -kTorsionFloor) {
    f.orientation = Orientation::negative;
    f.b = -b_std;
    f.torsion = -f.raw_torsion;
  } else {
    f.b = b_std;
    f.torsion = f.raw_torsion;
  }

  // d(kappa^2)/dt from the series of |v x a|^2 / |v|^6.
  std::array<S4, 3> V, A;
  for (int i = 0; i < 3; ++i) {
    V[i] = differentiate(c[i]);
    A[i] = differentiate(V[i]);
  }
  const auto C = cross(V, A);
  const S4 vv = dot(V, V);
  const S4 k2 = dot(C, C) / (vv * vv * vv);
  f.dkappa_ds = k2.derivative(1) / (2.0 * f.kappa) / f.speed;
  return f;
}

}  // namespace

const char* to_string(Orientation o) { return o == Orientation::positive ? "positive" : "negative"; }

FrenetSample frenet_apparatus(const ArcLengthTrajectory& traj, double s) {
  FrenetSample f = frame_at(traj.trajectory(), traj.t_of_s(s));
  f.s = s;
  return f;
}

FrenetSample frenet_at_time(const Trajectory& traj, double t) { return frame_at(traj, t); }

double axis_view_curvature(const AxisSample& a) {
  const double r = a.r[0], r1 = a.r[1], r2 = a.r[2], th1 = a.theta[1], th2 = a.theta[2];
  // Components in (e_r, e_theta, e_z) of the first two z-derivatives of the path.
  const Vec3 d1(r1, r * th1, 1.0);
  const Vec3 d2(r2 - r * th1 * th1, 2.0 * r1 * th1 + r * th2, 0.0);
  const double sp = d1.norm();
  return d1.cross(d2).norm() / (sp * sp * sp);
}

ThetaDerivatives theta_derivatives(const AxisLengthView& view, double z) {
  const AxisSample a = view.at(z);
  ThetaDerivatives d;
  d.z = z;
  d.r = a.r[0];
  d.theta1 = a.theta[1];
  d.theta2 = a.theta[2];
  d.theta3 = a.theta[3];
  d.v = a.v;
  d.dz_vz = a.dz_vz;
  d.dzz_vz = a.dzz_vz;
  const double vt = a.v.theta, vz = a.v.z, r = a.r[0];
  d.main2 = -vt * a.dz_vz / (vz * vz);
  d.main3 = -vt * a.dzz_vz / (r * vz * vz) + 2.0 * vt * a.dz_vz * a.dz_vz / (r * vz * vz * vz);
  d.remainder2 = d.theta2 - d.main2;
  d.remainder3 = d.theta3 - d.main3;
  return d;
}

MovingFrameMatrices moving_frame_matrices(double kappa, double torsion, double r_bar, double z_bar) {
  const double a = 1.0 - kappa * r_bar;
  if (!(a > 0.1)) {
    std::ostringstream os;
    os << "1 - kappa r_bar = " << a << " is not above 0.1; tube coordinates are not valid";
    throw DomainError(os.str());
  }
  MovingFrameMatrices m;
  m.forward << a, -z_bar * torsion, r_bar * torsion,
               0.0, 1.0, 0.0,
               0.0, 0.0, 1.0;
  m.inverse << 1.0 / a, z_bar * torsion / a, -r_bar * torsion / a,
               0.0, 1.0, 0.0,
               0.0, 0.0, 1.0;
  return m;
}

NormalCoordinates normal_coordinates(const ArcLengthTrajectory& traj, const Vec3& x) {
  const double s0 = traj.s_min(), s1 = traj.s_max();
  if (!(s1 > s0)) throw RangeError("trajectory has zero length");
  constexpr int kSamples = 400;
  std::vector<double> ss(kSamples + 1), dist(kSamples + 1);
  double kappa_max = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    ss[i] = s0 + (s1 - s0) * i / kSamples;
    dist[i] = (x - traj.position(ss[i])).norm();
    try {
      kappa_max = std::max(kappa_max, frenet_apparatus(traj, ss[i]).kappa);
    } catch (const FrameUndefined&) {
    }
  }
  const double tube = kappa_max > 0.0 ? 1.0 / kappa_max : std::numeric_limits<double>::infinity();

  // Newton on (x - eta(s)) . tau(s) = 0 from every sampled local minimum of the distance.
  std::vector<double> roots;
  for (int i = 0; i <= kSamples; ++i) {
    const bool left = i == 0 || dist[i] <= dist[i - 1];
    const bool right = i == kSamples || dist[i] <= dist[i + 1];
    if (!(left && right)) continue;
    double s = ss[i];
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const FrenetSample f = frenet_apparatus(traj, s);
      const Vec3 d = x - f.position;
      const double g = d.dot(f.tau);
      const double dg = -1.0 + f.kappa * d.dot(f.n);
      const double step = std::clamp(-g / dg, -(s1 - s0) / kSamples, (s1 - s0) / kSamples);
      const double next = std::clamp(s + step, s0, s1);
      if (std::abs(next - s) <= 1e-14 * std::max(1.0, std::abs(s))) {
        converged = std::abs(g) <= 1e-10 * std::max(1.0, d.norm());
        s = next;
        break;
      }
      s = next;
    }
    if (!converged) {
      const FrenetSample f = frenet_apparatus(traj, s);
      converged = std::abs((x - f.position).dot(f.tau)) <= 1e-10;
    }
    if (!converged) continue;
    if ((x - traj.position(s)).norm() >= tube) continue;
    bool fresh = true;
    for (double r : roots)
      if (std::abs(r - s) <= 1e-7 * std::max(1.0, std::abs(s))) fresh = false;
    if (fresh) roots.push_back(s);
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "point is not within the tube of radius " << tube << " around the trajectory";
    throw DomainError(os.str());
  }
  if (roots.size() > 1) {
    std::ostringstream os;
    os << "point has " << roots.size() << " nearest trajectory points within the tube (s =";
    for (double r : roots) os << ' ' << r;
    os << ')';
    throw AmbiguityError(os.str());
  }
  const FrenetSample f = frenet_apparatus(traj, roots.front());
  const Vec3 d = x - f.position;
  NormalCoordinates nc;
  nc.theta_bar = roots.front();
  nc.r_bar = d.dot(f.n);
  nc.z_bar = d.dot(f.b);
  nc.residual = (f.position + nc.r_bar * f.n + nc.z_bar * f.b - x).norm();
  nc.tube_radius = tube;
  return nc;
}

}  // namespace axiflow
