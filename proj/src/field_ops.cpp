#include "axiflow/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axiflow {

double divergence(const Field& field, double r, double z, double t) {
  const VelocityJet j = field.jet(r, z, t);
  const double dvr = j.r.coeff(1, 0, 0);
  const double dvz = j.z.coeff(0, 1, 0);
  if (r >= kAxisFloor) return dvr + j.r.value() / r + dvz;
  if (field.info().parity == AxisParity::none && j.r.value() != 0.0)
    throw DomainError("divergence on the axis needs v_r = 0 there; field '" + field.name() +
                      "' has v_r = " + std::to_string(j.r.value()));
  return 2.0 * dvr + dvz;
}

CylVelocity material_acceleration(const Field& field, double r, double z, double t) {
  const VelocityJet j = field.jet(r, z, t);
  const CylVelocity v = j.value();
  auto convective = [&](const Taylor<3>& c) {
    return c.coeff(0, 0, 1) + v.r * c.coeff(1, 0, 0) + v.z * c.coeff(0, 1, 0);
  };
  double centripetal = 0.0, coriolis = 0.0;
  if (r >= kAxisFloor) {
    centripetal = v.theta * v.theta / r;
    coriolis = v.r * v.theta / r;
  } else if (field.info().parity == AxisParity::standard) {
    // v_theta ~ r dv_theta/dr and v_r ~ r dv_r/dr next to the axis.
    const double wt = j.theta.coeff(1, 0, 0), wr = j.r.coeff(1, 0, 0);
    centripetal = r * wt * wt;
    coriolis = r * wr * wt;
  } else if (v.theta != 0.0 || v.r != 0.0) {
    throw DomainError("acceleration on the axis is singular for field '" + field.name() + "'");
  }
  return {convective(j.r) - centripetal, convective(j.theta) + coriolis, convective(j.z)};
}

std::array<Taylor<2>, 3> acceleration_jet(const Field& field, double r, double z, double t) {
  if (r < kAxisFloor) throw DomainError("acceleration expansion needs r >= axis floor");
  using T2 = Taylor<2>;
  const VelocityJet j = field.jet(r, z, t);
  const T2 vr = j.r.truncate<2>(), vt = j.theta.truncate<2>(), vz = j.z.truncate<2>();
  const T2 rv = T2::variable(Axis::r, r);
  auto convective = [&](const Taylor<3>& c) {
    return c.diff(Axis::t) + vr * c.diff(Axis::r) + vz * c.diff(Axis::z);
  };
  return {convective(j.r) - vt * vt / rv, convective(j.theta) + vr * vt / rv, convective(j.z)};
}

SampleGrid SampleGrid::spanning(const Field& field, int n, double z_lo, double z_hi, double t_lo,
                                double t_hi) {
  const Domain& d = field.info().domain;
  const double zl = std::max(z_lo, d.z_min), zh = std::min(z_hi, d.z_max);
  const double tl = std::max(t_lo, d.t_min), th = std::min(t_hi, d.t_max);
  SampleGrid g;
  for (int i = 0; i < n; ++i) {
    const double u = n > 1 ? static_cast<double>(i) / (n - 1) : 0.5;
    g.r.push_back(d.r_max * (0.05 + 0.9 * u));
    g.z.push_back(zl + (zh - zl) * u);
    g.t.push_back(tl + (th - tl) * u);
  }
  return g;
}

Certification certify_euler(const Field& field, const SampleGrid& grid, double tolerance) {
  Certification c;
  c.tolerance = tolerance;
  const double length = field.info().domain.r_max;
  double worst_r = 0, worst_z = 0, worst_t = 0, worst = -1;
  for (double r : grid.r)
    for (double z : grid.z)
      for (double t : grid.t) {
        const auto a = acceleration_jet(field, r, z, t);
        const double mag = std::hypot(a[0].value(), a[1].value(), a[2].value());
        const double swirl = std::abs(a[1].value());
        const double curl = std::abs(a[0].coeff(0, 1, 0) - a[2].coeff(1, 0, 0)) * length;
        c.max_acceleration = std::max(c.max_acceleration, mag);
        c.max_swirl_acceleration = std::max(c.max_swirl_acceleration, swirl);
        c.max_curl = std::max(c.max_curl, curl / length);
        if (std::max(swirl, curl) > worst) {
          worst = std::max(swirl, curl);
          worst_r = r;
          worst_z = z;
          worst_t = t;
        }
      }
  const double bound = tolerance * c.max_acceleration;
  c.exact = c.max_swirl_acceleration <= bound && c.max_curl * length <= bound;
  std::ostringstream os;
  if (c.exact) {
    os << "Du/Dt is a gradient to relative " << tolerance;
  } else {
    os << "Du/Dt is not a gradient: |a_theta| = " << c.max_swirl_acceleration
       << ", |curl| = " << c.max_curl << " against |a| = " << c.max_acceleration
       << " (worst at r=" << worst_r << ", z=" << worst_z << ", t=" << worst_t << ")";
  }
  c.detail = os.str();
  return c;
}

}  // namespace axiflow
