#pragma once

#include <array>
#include <limits>
#include <vector>

#include "axiflow/field.hpp"
#include "axiflow/inflow.hpp"
#include "axiflow/ode.hpp"
#include "axiflow/trajectory.hpp"

namespace axiflow {

struct AtlasOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  /// Inlet station; NaN takes the field's default.
  double z_in = std::numeric_limits<double>::quiet_NaN();
  unsigned threads = 1;
};

/// One instantaneous streamline r = R(r0, z) at frozen time t, integrated in z
/// together with its sensitivities to the inlet radius r0.
/// State: (R, Theta, dR/dr0, d2R/dr0^2, d3R/dr0^3, dTheta/dr0).
struct StreamlineLine {
  double r0 = 0.0;
  double t = 0.0;
  double z_in = 0.0;
  DenseSolution<6> dense;

  double z_end() const { return dense.t_stop(); }
};

StreamlineLine trace_streamline(const Field& field, double t, double r0, double z_in, double z_end,
                                const AtlasOptions& options = {});

/// Map derivatives at (r0, z): index k of an array is the k-th derivative.
struct MapPartials {
  double r0 = 0.0, z = 0.0;
  std::array<double, 4> d_r0{};  ///< R, dR/dr0, d2R/dr0^2, d3R/dr0^3
  std::array<double, 4> d_z{};   ///< R, dR/dz, d2R/dz^2, d3R/dz^3
  double d_r0_z = 0.0;           ///< d2R/dr0 dz
  double d_r0r0_z = 0.0;         ///< d3R/dr0^2 dz
  double d_r0_zz = 0.0;          ///< d3R/dr0 dz^2
  double theta = 0.0;            ///< swirl angle accumulated from the inlet
  double d_r0_theta = 0.0;
};

/// Derivatives of the inverse map r0 = R^{-1}(r, z) at fixed z (d_r) and fixed r (d_z).
struct InversePartials {
  double r0 = 0.0;
  std::array<double, 4> d_r{};
  std::array<double, 4> d_z{};
};

/// rho = v_z / g expressed on the inlet radius: rho = r0 / (R dR/dr0).
struct InflowPropagation {
  double rho = 0.0;
  double d_z = 0.0, d_zz = 0.0;
  double d_r0 = 0.0, d_r0r0 = 0.0;
};

/// Streamline map over a grid of inlet radii; off-grid radii use two-point Hermite
/// interpolation of R and its three r0-derivatives.
class StreamlineMap {
 public:
  StreamlineMap(FieldPtr field, double t, std::vector<double> z_grid, std::vector<StreamlineLine> lines);

  const Field& field() const { return *field_; }
  double t() const { return t_; }
  double z_in() const { return lines_.front().z_in; }
  double z_end() const { return z_end_; }
  std::vector<double> r0_grid() const;
  const std::vector<double>& z_grid() const { return z_grid_; }
  const std::vector<StreamlineLine>& lines() const { return lines_; }

  MapPartials partials(double r0, double z) const;
  double R(double r0, double z) const { return partials(r0, z).d_r0[0]; }
  /// r0 such that R(r0, z) = r.
  double invert(double r, double z) const;
  InversePartials inverse_partials(double r, double z) const;
  InflowPropagation inflow_propagation(double r0, double z) const;

 private:
  struct LineState {
    double R, theta, q1, q2, q3, p1;
  };
  LineState state_at(double r0, double z) const;
  void check_z(double z) const;

  FieldPtr field_;
  double t_ = 0.0;
  double z_end_ = 0.0;
  std::vector<double> z_grid_;
  std::vector<StreamlineLine> lines_;
};

/// Traces every inlet radius (in parallel when options.threads > 1) and checks that
/// the lines stay ordered at every z station and that dR/dr0 > 0.
StreamlineMap build_streamline_map(FieldPtr field, double t, std::vector<double> r0_grid,
                                   std::vector<double> z_grid, const AtlasOptions& options = {});

/// Velocity rebuilt from the map: v_z = g rho, v_r = v_z dR/dz.
struct ReconstructedVelocity {
  double r0 = 0.0;
  double v_r = 0.0;
  double v_z = 0.0;
};
ReconstructedVelocity reconstruct_velocity(const StreamlineMap& map, double g, double r, double z);

/// Spatial rate: sum over orders 1..3 of |d^k R / dz^k|, |d^k R / dr0^k| and the same
/// for the inverse map (12 terms, no mixed derivatives).
struct LaminarRateX {
  double value = 0.0;
  std::array<double, 12> terms{};
  static const std::array<const char*, 12>& names();
};
LaminarRateX laminar_rate_x(const StreamlineMap& map, double r0, double z);

/// Temporal rate |d_t R^{-1}| + |d_t dR/dr0| + |d_t dR/dz| by centred differences of
/// maps built at t +- dt, with a second evaluation at dt/2 as a step check.
struct LaminarRateT {
  double value = 0.0;
  std::array<double, 3> terms{};
  double value_half_step = 0.0;
  double step_change = 0.0;  ///< |value - value_half_step|
  double dt = 0.0;
};
LaminarRateT laminar_rate_t(const FieldPtr& field, double t, double dt, double r0, double z,
                            const AtlasOptions& options = {});

/// Default step for the temporal rate: 1e-3 of the inflow variation time.
double default_rate_step(const InflowProfile& g, double t);

/// Swirl carried by angular-momentum transport, v_theta(seed) exp(-int v_r / R dt),
/// next to the field's own swirl along the trajectory.
struct SwirlSample {
  double t = 0.0;
  double R = 0.0;
  double transported = 0.0;
  double field = 0.0;
  double relative_error = 0.0;
};
std::vector<SwirlSample> swirl_transport(const Trajectory& traj);

}  // namespace axiflow
