#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "axiflow/field.hpp"
#include "axiflow/ode.hpp"

namespace axiflow {

struct Seed {
  double r = 0.0;
  double theta = 0.0;
  double z = 0.0;
};

enum class TrajectoryStatus { completed, left_domain, axis_hit, stagnation };
const char* to_string(TrajectoryStatus s);

struct TrajectoryOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double speed_floor = 1e-12;  ///< |u| below this counts as stagnation
  std::size_t max_steps = 500000;
};

struct TrajectoryPoint {
  double t = 0.0;
  double s = 0.0;  ///< arc length accumulated from the seed time
  double R = 0.0, theta = 0.0, Z = 0.0;
  CylVelocity v;
};

/// Cartesian position of a cylindrical point.
Eigen::Vector3d to_cartesian(double R, double theta, double Z);
/// Cartesian vector from cylindrical components at angle theta.
Eigen::Vector3d to_cartesian(const CylVelocity& v, double theta);

/// Particle path with dense output. State is (R, Theta, Z, s).
class Trajectory {
 public:
  Trajectory(FieldPtr field, Seed seed, double t_seed, TrajectoryOptions options,
             DenseSolution<4> dense, TrajectoryStatus status, std::string detail);

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const Seed& seed() const { return seed_; }
  const TrajectoryOptions& options() const { return options_; }
  TrajectoryStatus status() const { return status_; }
  const std::string& status_detail() const { return detail_; }

  double t_seed() const { return t_seed_; }
  double t_min() const { return dense_.t_min(); }
  double t_max() const { return dense_.t_max(); }
  bool contains(double t) const { return dense_.contains(t); }

  TrajectoryPoint at(double t) const;
  Eigen::Vector3d position(double t) const;
  Eigen::Vector3d velocity(double t) const;
  /// Ends of the accepted steps, in increasing time.
  std::vector<double> node_times() const;
  const DenseSolution<4>& dense() const { return dense_; }

 private:
  FieldPtr field_;
  Seed seed_;
  double t_seed_ = 0.0;
  TrajectoryOptions options_;
  DenseSolution<4> dense_;
  TrajectoryStatus status_ = TrajectoryStatus::completed;
  std::string detail_;
};

/// Integrates dR/dt = v_r, dTheta/dt = v_theta / R, dZ/dt = v_z from the seed at
/// t0 towards t1; stops early at the domain boundary, the axis or a stagnation point.
Trajectory integrate_trajectory(FieldPtr field, const Seed& seed, double t0, double t1,
                                const TrajectoryOptions& options = {});

/// Taylor expansions in the time increment h of a particle path and of the
/// velocity components along it. Positions are exact to h^4, velocities to h^3.
struct PathSeries {
  Series<4> R, theta, Z;
  Series<4> v_r, v_theta, v_z;
  std::array<Series<4>, 3> cartesian() const;
};
PathSeries path_series(const Field& field, double R, double theta, double Z, double t);

/// d|u|/dt along the trajectory: (v . d_t v) / |u| with d_t the derivative along the path.
double speed_rate(const Trajectory& traj, double t);

/// The same path parametrized by arc length.
class ArcLengthTrajectory {
 public:
  explicit ArcLengthTrajectory(Trajectory traj);

  const Trajectory& trajectory() const { return traj_; }
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  double length() const { return s_max_ - s_min_; }

  double s_of_t(double t) const;
  double t_of_s(double s) const;
  Eigen::Vector3d position(double s) const;
  Eigen::Vector3d tangent(double s) const;

 private:
  Trajectory traj_;
  double s_min_ = 0.0, s_max_ = 0.0;
};

/// Throws StagnationError (with the time) if |u| vanishes along the path.
ArcLengthTrajectory reparametrize_arclength(const Trajectory& traj);

/// k-th derivatives (k = 0..3) with respect to z of R, Theta and t along the path.
struct AxisSample {
  double z = 0.0;
  std::array<double, 4> r{}, theta{}, time{};
  CylVelocity v;       ///< velocity at the sample (chain-rule samples only)
  double dz_vz = 0.0;  ///< d(v_z)/dz along the path
  double dzz_vz = 0.0;
};

/// The path parametrized by its axial coordinate; needs v_z > 0 throughout.
class AxisLengthView {
 public:
  explicit AxisLengthView(Trajectory traj);

  const Trajectory& trajectory() const { return traj_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  double t_of_z(double z) const;

  /// Derivatives from the chain rule through the field expansion.
  AxisSample at(double z) const;
  /// Derivatives from 7-point differences of the dense output (step 0 picks the default).
  AxisSample at_finite_difference(double z, double step = 0.0) const;

 private:
  Trajectory traj_;
  double z_min_ = 0.0, z_max_ = 0.0;
};

/// Throws UnilateralViolation at the first sample with v_z <= 0.
AxisLengthView axis_length_view(const Trajectory& traj);

}  // namespace axiflow
