#pragma once

#include <array>
#include <string>
#include <vector>

#include "axiflow/field.hpp"

namespace axiflow {

/// (1/r) d(r v_r)/dr + dv_z/dz; the axis value uses the limit 2 dv_r/dr + dv_z/dz.
double divergence(const Field& field, double r, double z, double t);

/// Material acceleration Du/Dt in cylindrical components.
CylVelocity material_acceleration(const Field& field, double r, double z, double t);

/// Second-order expansions of (a_r, a_theta, a_z) about (r, z, t). Needs r >= kAxisFloor.
std::array<Taylor<2>, 3> acceleration_jet(const Field& field, double r, double z, double t);

/// Sample points for certification: every combination of the listed coordinates.
struct SampleGrid {
  std::vector<double> r, z, t;
  /// n points per axis across the field domain (finite stand-ins for open ends).
  static SampleGrid spanning(const Field& field, int n, double z_lo = -2.0, double z_hi = 2.0,
                             double t_lo = 0.0, double t_hi = 1.0);
};

/// Outcome of checking that Du/Dt is a pure gradient: a_theta = 0 and
/// d(a_r)/dz - d(a_z)/dr = 0, relative to the largest |a| on the grid.
struct Certification {
  bool exact = false;
  double max_swirl_acceleration = 0.0;  ///< max |a_theta|
  double max_curl = 0.0;                ///< max |d_z a_r - d_r a_z|
  double max_acceleration = 0.0;        ///< max |a|
  double tolerance = 1e-8;
  std::string detail;
};

Certification certify_euler(const Field& field, const SampleGrid& grid, double tolerance = 1e-8);

}  // namespace axiflow
