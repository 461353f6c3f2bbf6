#include "axiflow/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "parallel.hpp"

namespace axiflow {

namespace {

// Two-point Hermite interpolation through values and M-1 derivatives at each end,
// returning the interpolant and its first three derivatives at x.
template <int M>
std::array<double, 4> hermite(double x0, const std::array<double, M>& f0, double x1,
                              const std::array<double, M>& f1, double x) {
  constexpr int n = 2 * M;
  std::array<double, n> nodes{};
  for (int i = 0; i < M; ++i) {
    nodes[i] = x0;
    nodes[M + i] = x1;
  }
  // Divided differences with repeated nodes; q[i][j] = f[nodes i-j .. i].
  std::array<std::array<double, n>, n> q{};
  for (int i = 0; i < n; ++i) q[i][0] = i < M ? f0[0] : f1[0];
  for (int j = 1; j < n; ++j)
    for (int i = j; i < n; ++i) {
      if (nodes[i] == nodes[i - j]) {
        const auto& f = i < M ? f0 : f1;
        q[i][j] = f[j] / detail::factorial(j);
      } else {
        q[i][j] = (q[i][j - 1] - q[i - 1][j - 1]) / (nodes[i] - nodes[i - j]);
      }
    }
  using S = Series<3>;
  const S xs = S::variable(x);
  S p(q[n - 1][n - 1]);
  for (int j = n - 2; j >= 0; --j) p = p * (xs - nodes[j]) + q[j][j];
  return {p.derivative(0), p.derivative(1), p.derivative(2), p.derivative(3)};
}

double resolve_z_in(const Field& field, const AtlasOptions& options) {
  return std::isnan(options.z_in) ? field.info().default_z_in : options.z_in;
}

}  // namespace

StreamlineLine trace_streamline(const Field& field, double t, double r0, double z_in, double z_end,
                                const AtlasOptions& options) {
  if (!(z_end >= z_in)) throw ValidationError("streamline end station lies before the inlet");
  field.check_domain(r0, z_in, t);
  auto rhs = [&](double z, const State<6>& y) -> State<6> {
    const double R = y[0];
    if (!(R >= 0.0) || !field.contains(R, z, t)) {
      std::ostringstream os;
      os << "streamline from r0 = " << r0 << " leaves the domain at (R, z) = (" << R << ", " << z << ")";
      throw StepRejected(1, os.str());
    }
    const VelocityJet J = field.jet(R, z, t);
    const double vz = J.z.value();
    if (!(vz > 0.0)) {
      std::ostringstream os;
      os << "v_z = " << vz << " <= 0 at (r, z, t) = (" << R << ", " << z << ", " << t
         << "); the streamline map needs one-directional axial flow";
      throw UnilateralViolation(os.str());
    }
    const Taylor<3> S = field.slope_jet(R, z, t);
    const double F = S.value(), FR = S.partial(1, 0, 0), FRR = S.partial(2, 0, 0),
                 FRRR = S.partial(3, 0, 0);
    double H = 0.0, HR = 0.0;
    if (R >= kAxisFloor) {
      using T1 = Taylor<1>;
      const T1 h = J.theta.truncate<1>() / (T1::variable(Axis::r, R) * J.z.truncate<1>());
      H = h.value();
      HR = h.coeff(1, 0, 0);
    } else {
      H = J.theta.coeff(1, 0, 0) / vz;  // even in R, so its slope vanishes on the axis
    }
    const double q1 = y[2], q2 = y[3], q3 = y[4];
    return {F,
            H,
            FR * q1,
            FRR * q1 * q1 + FR * q2,
            FRRR * q1 * q1 * q1 + 3.0 * FRR * q1 * q2 + FR * q3,
            HR * q1};
  };
  OdeOptions ode;
  ode.rel_tol = options.rel_tol;
  ode.abs_tol = options.abs_tol;
  auto res = integrate_dopri5<6>(rhs, z_in, State<6>{r0, 0.0, 1.0, 0.0, 0.0, 0.0}, z_end, ode);
  if (res.halt != OdeHalt::completed) throw DomainError(res.reason);
  StreamlineLine line;
  line.r0 = r0;
  line.t = t;
  line.z_in = z_in;
  line.dense = std::move(res.solution);
  if (line.dense.empty()) {
    // Zero-length line: a single trivial step keeps the queries uniform.
    DenseStep<6> st;
    st.t0 = z_in;
    st.h = 1.0;
    st.c[0] = {r0, 0.0, 1.0, 0.0, 0.0, 0.0};
    line.dense.push(st);
    line.dense.set_end(z_in);
  }
  return line;
}

// ---------------------------------------------------------------------------

StreamlineMap::StreamlineMap(FieldPtr field, double t, std::vector<double> z_grid,
                             std::vector<StreamlineLine> lines)
    : field_(std::move(field)), t_(t), z_grid_(std::move(z_grid)), lines_(std::move(lines)) {
  if (lines_.empty()) throw ValidationError("streamline map needs at least one line");
  z_end_ = lines_.front().z_end();
  for (const auto& l : lines_) z_end_ = std::min(z_end_, l.z_end());
}

std::vector<double> StreamlineMap::r0_grid() const {
  std::vector<double> g;
  for (const auto& l : lines_) g.push_back(l.r0);
  return g;
}

void StreamlineMap::check_z(double z) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(z));
  if (z < z_in() - slack || z > z_end_ + slack) {
    std::ostringstream os;
    os << "z = " << z << " outside the mapped range [" << z_in() << ", " << z_end_ << "]";
    throw RangeError(os.str());
  }
}

StreamlineMap::LineState StreamlineMap::state_at(double r0, double z) const {
  check_z(z);
  z = std::clamp(z, z_in(), z_end_);
  const double lo = lines_.front().r0, hi = lines_.back().r0;
  const double tol = 1e-14 * std::max(1.0, std::abs(r0));
  if (r0 < lo - tol || r0 > hi + tol) {
    std::ostringstream os;
    os << "inlet radius " << r0 << " outside the mapped range [" << lo << ", " << hi << "]";
    throw RangeError(os.str());
  }
  auto from = [](const State<6>& y) { return LineState{y[0], y[1], y[2], y[3], y[4], y[5]}; };
  std::size_t i = 0;
  while (i + 1 < lines_.size() && lines_[i + 1].r0 <= r0) ++i;
  if (std::abs(lines_[i].r0 - r0) <= tol) return from(lines_[i].dense.state(z));
  if (i + 1 >= lines_.size()) return from(lines_[i].dense.state(z));
  const State<6> a = lines_[i].dense.state(z), b = lines_[i + 1].dense.state(z);
  const double x0 = lines_[i].r0, x1 = lines_[i + 1].r0;
  const auto rr = hermite<4>(x0, {a[0], a[2], a[3], a[4]}, x1, {b[0], b[2], b[3], b[4]}, r0);
  const auto th = hermite<2>(x0, {a[1], a[5]}, x1, {b[1], b[5]}, r0);
  return {rr[0], th[0], rr[1], rr[2], rr[3], th[1]};
}

MapPartials StreamlineMap::partials(double r0, double z) const {
  const LineState s = state_at(r0, z);
  const Taylor<3> S = field_->slope_jet(std::max(s.R, 0.0), z, t_);
  const double F = S.value(), FR = S.partial(1, 0, 0), FRR = S.partial(2, 0, 0);
  const double Fz = S.partial(0, 1, 0), FRz = S.partial(1, 1, 0), Fzz = S.partial(0, 2, 0);
  MapPartials p;
  p.r0 = r0;
  p.z = z;
  p.d_r0 = {s.R, s.q1, s.q2, s.q3};
  p.d_z = {s.R, F, FR * F + Fz, FRR * F * F + 2.0 * F * FRz + FR * FR * F + FR * Fz + Fzz};
  p.d_r0_z = FR * s.q1;
  p.d_r0r0_z = FRR * s.q1 * s.q1 + FR * s.q2;
  p.d_r0_zz = (FRz + F * FRR + FR * FR) * s.q1;
  p.theta = s.theta;
  p.d_r0_theta = s.p1;
  return p;
}

double StreamlineMap::invert(double r, double z) const {
  check_z(z);
  std::vector<double> Rs;
  for (const auto& l : lines_) Rs.push_back(l.dense.state(std::clamp(z, z_in(), z_end_))[0]);
  for (std::size_t i = 1; i < Rs.size(); ++i)
    if (!(Rs[i] > Rs[i - 1])) {
      std::ostringstream os;
      os << "streamlines from r0 = " << lines_[i - 1].r0 << " and " << lines_[i].r0
         << " are not ordered at z = " << z;
      throw StructuralError(os.str());
    }
  const double tol = 1e-13 * std::max(1.0, std::abs(r));
  if (r < Rs.front() - tol || r > Rs.back() + tol) {
    std::ostringstream os;
    os << "radius " << r << " at z = " << z << " is outside the mapped band [" << Rs.front()
       << ", " << Rs.back() << "]";
    throw RangeError(os.str());
  }
  std::size_t i = 0;
  while (i + 1 < Rs.size() && Rs[i + 1] <= r) ++i;
  if (std::abs(Rs[i] - r) <= tol || i + 1 == Rs.size()) return lines_[i].r0;
  // Safeguarded Newton on the Hermite interpolant inside the bracket.
  double a = lines_[i].r0, b = lines_[i + 1].r0;
  double x = a + (b - a) * (r - Rs[i]) / (Rs[i + 1] - Rs[i]);
  for (int it = 0; it < 100; ++it) {
    const LineState s = state_at(x, z);
    const double f = s.R - r;
    if (f > 0) b = x; else a = x;
    double next = x - f / s.q1;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

InversePartials StreamlineMap::inverse_partials(double r, double z) const {
  InversePartials ip;
  ip.r0 = invert(r, z);
  const MapPartials p = partials(ip.r0, z);
  const double q1 = p.d_r0[1], q2 = p.d_r0[2], q3 = p.d_r0[3];
  if (!(q1 > 0.0)) throw StructuralError("dR/dr0 is not positive; the map cannot be inverted");
  ip.d_r = {ip.r0, 1.0 / q1, -q2 / (q1 * q1 * q1),
            -q3 / (q1 * q1 * q1 * q1) + 3.0 * q2 * q2 / (q1 * q1 * q1 * q1 * q1)};
  // Implicit differentiation of R(r0(z), z) = r at fixed r.
  const double Rz = p.d_z[1], Rzz = p.d_z[2], Rzzz = p.d_z[3];
  const double Raz = p.d_r0_z, Raaz = p.d_r0r0_z, Razz = p.d_r0_zz;
  const double p1 = -Rz / q1;
  const double p2 = -(q2 * p1 * p1 + 2.0 * Raz * p1 + Rzz) / q1;
  const double p3 = -(q3 * p1 * p1 * p1 + 3.0 * Raaz * p1 * p1 + 3.0 * Razz * p1 + Rzzz +
                      3.0 * q2 * p1 * p2 + 3.0 * Raz * p2) /
                    q1;
  ip.d_z = {ip.r0, p1, p2, p3};
  return ip;
}

InflowPropagation StreamlineMap::inflow_propagation(double r0, double z) const {
  const double a = std::max(r0, kAxisFloor);
  const MapPartials p = partials(a, z);
  using T2 = Taylor<2>;
  T2 R, Q;
  R.coeff(0, 0, 0) = p.d_r0[0];
  R.coeff(1, 0, 0) = p.d_r0[1];
  R.coeff(0, 1, 0) = p.d_z[1];
  R.coeff(2, 0, 0) = p.d_r0[2] / 2.0;
  R.coeff(1, 1, 0) = p.d_r0_z;
  R.coeff(0, 2, 0) = p.d_z[2] / 2.0;
  Q.coeff(0, 0, 0) = p.d_r0[1];
  Q.coeff(1, 0, 0) = p.d_r0[2];
  Q.coeff(0, 1, 0) = p.d_r0_z;
  Q.coeff(2, 0, 0) = p.d_r0[3] / 2.0;
  Q.coeff(1, 1, 0) = p.d_r0r0_z;
  Q.coeff(0, 2, 0) = p.d_r0_zz / 2.0;
  const T2 rho = T2::variable(Axis::r, a) / (R * Q);
  return {rho.value(), rho.partial(0, 1, 0), rho.partial(0, 2, 0), rho.partial(1, 0, 0),
          rho.partial(2, 0, 0)};
}

StreamlineMap build_streamline_map(FieldPtr field, double t, std::vector<double> r0_grid,
                                   std::vector<double> z_grid, const AtlasOptions& options) {
  if (!field) throw ValidationError("streamline map needs a field");
  if (r0_grid.empty()) throw ValidationError("streamline map needs inlet radii");
  if (z_grid.empty()) throw ValidationError("streamline map needs z stations");
  std::sort(r0_grid.begin(), r0_grid.end());
  std::sort(z_grid.begin(), z_grid.end());
  if (std::adjacent_find(r0_grid.begin(), r0_grid.end()) != r0_grid.end())
    throw ValidationError("inlet radii must be distinct");
  const double z_in = resolve_z_in(*field, options);
  if (z_grid.front() < z_in) throw ValidationError("z stations must not precede the inlet");
  std::vector<StreamlineLine> lines(r0_grid.size());
  detail::parallel_for(r0_grid.size(), options.threads, [&](std::size_t i) {
    lines[i] = trace_streamline(*field, t, r0_grid[i], z_in, z_grid.back(), options);
  });
  for (const auto& l : lines)
    for (const auto& st : l.dense.steps())
      if (!(st.c[0][2] > 0.0)) {
        std::ostringstream os;
        os << "dR/dr0 = " << st.c[0][2] << " along the line from r0 = " << l.r0
           << " near z = " << st.t0 << "; neighbouring streamlines collapse";
        throw StructuralError(os.str());
      }
  StreamlineMap map(field, t, z_grid, std::move(lines));
  for (double z : map.z_grid()) {
    double prev = -1.0;
    for (const auto& l : map.lines()) {
      const double R = l.dense.state(z)[0];
      if (!(R > prev)) {
        std::ostringstream os;
        os << "streamline from r0 = " << l.r0 << " crosses its neighbour at z = " << z;
        throw StructuralError(os.str());
      }
      prev = R;
    }
  }
  return map;
}

ReconstructedVelocity reconstruct_velocity(const StreamlineMap& map, double g, double r, double z) {
  ReconstructedVelocity v;
  v.r0 = map.invert(r, z);
  v.v_z = g * map.inflow_propagation(v.r0, z).rho;
  v.v_r = v.v_z * map.partials(v.r0, z).d_z[1];
  return v;
}

const std::array<const char*, 12>& LaminarRateX::names() {
  static const std::array<const char*, 12> n = {
      "dR_dz",     "d2R_dz2",     "d3R_dz3",     "dR_dr0",     "d2R_dr02",     "d3R_dr03",
      "dRinv_dz",  "d2Rinv_dz2",  "d3Rinv_dz3",  "dRinv_dr",   "d2Rinv_dr2",   "d3Rinv_dr3"};
  return n;
}

LaminarRateX laminar_rate_x(const StreamlineMap& map, double r0, double z) {
  const MapPartials p = map.partials(r0, z);
  const InversePartials ip = map.inverse_partials(p.d_r0[0], z);
  LaminarRateX out;
  for (int k = 1; k <= 3; ++k) {
    out.terms[k - 1] = std::abs(p.d_z[k]);
    out.terms[2 + k] = std::abs(p.d_r0[k]);
    out.terms[5 + k] = std::abs(ip.d_z[k]);
    out.terms[8 + k] = std::abs(ip.d_r[k]);
  }
  for (double v : out.terms) out.value += v;
  return out;
}

LaminarRateT laminar_rate_t(const FieldPtr& field, double t, double dt, double r0, double z,
                            const AtlasOptions& options) {
  if (!(dt > 0.0)) throw ValidationError("time step for the temporal rate must be positive");
  const double r_max = field->info().domain.r_max;
  const double spread = 0.05 * r_max;
  std::vector<double> grid = {r0};
  if (r0 - spread >= 0.0) grid.insert(grid.begin(), r0 - spread);
  else if (r0 > 0.0) grid.insert(grid.begin(), 0.0);
  if (r0 + spread <= r_max) grid.push_back(r0 + spread);
  else if (r0 < r_max) grid.push_back(r_max);
  const double z_in = resolve_z_in(*field, options);
  const double r = trace_streamline(*field, t, r0, z_in, z, options).dense.state(z)[0];

  auto rate = [&](double step, std::array<double, 3>& terms) {
    const StreamlineMap plus = build_streamline_map(field, t + step, grid, {z}, options);
    const StreamlineMap minus = build_streamline_map(field, t - step, grid, {z}, options);
    const MapPartials pp = plus.partials(r0, z), pm = minus.partials(r0, z);
    terms[0] = std::abs(plus.invert(r, z) - minus.invert(r, z)) / (2.0 * step);
    terms[1] = std::abs(pp.d_r0[1] - pm.d_r0[1]) / (2.0 * step);
    terms[2] = std::abs(pp.d_z[1] - pm.d_z[1]) / (2.0 * step);
    return terms[0] + terms[1] + terms[2];
  };
  LaminarRateT out;
  out.dt = dt;
  out.value = rate(dt, out.terms);
  std::array<double, 3> half{};
  out.value_half_step = rate(0.5 * dt, half);
  out.step_change = std::abs(out.value - out.value_half_step);
  return out;
}

double default_rate_step(const InflowProfile& g, double t) {
  const double tau = g.variation_timescale(t);
  return std::isfinite(tau) && tau > 0.0 ? 1e-3 * tau : 1e-3;
}

std::vector<SwirlSample> swirl_transport(const Trajectory& traj) {
  const Field& field = traj.field();
  const Seed& seed = traj.seed();
  const double w0 = field.velocity(seed.r, seed.z, traj.t_seed()).theta;
  auto integrand = [&](double tau) {
    const State<4> y = traj.dense().state(tau);
    return field.velocity(y[0], y[2], tau).r / y[0];
  };
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  std::vector<SwirlSample> out;
  auto record = [&](double t, double integral) {
    const TrajectoryPoint p = traj.at(t);
    SwirlSample s;
    s.t = t;
    s.R = p.R;
    s.transported = w0 * std::exp(-integral);
    s.field = p.v.theta;
    const double scale = std::max(std::abs(s.field), std::abs(s.transported));
    s.relative_error = scale > 0.0 ? std::abs(s.transported - s.field) / scale : 0.0;
    out.push_back(s);
  };
  record(traj.t_seed(), 0.0);
  double integral = 0.0;
  for (const auto& st : traj.dense().steps()) {
    const double a = st.t0;
    const double b = std::clamp(st.t1(), traj.t_min(), traj.t_max());
    integral += Gauss::integrate(integrand, a, b);
    record(b, integral);
  }
  std::sort(out.begin(), out.end(), [](const SwirlSample& x, const SwirlSample& y) { return x.t < y.t; });
  return out;
}

}  // namespace axiflow
