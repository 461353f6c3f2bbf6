#pragma once

#include <Eigen/Dense>

#include "axiflow/trajectory.hpp"

namespace axiflow {

/// Sign s in b = s (tau x n), chosen so that the reported torsion is non-negative.
enum class Orientation { positive = 1, negative = -1 };
const char* to_string(Orientation o);

/// Curvature below kCurvatureFloor / r_max leaves n and b undefined.
inline constexpr double kCurvatureFloor = 1e-8;
/// |raw torsion| below this keeps the positive orientation.
inline constexpr double kTorsionFloor = 1e-10;

/// Frenet apparatus of a particle path at one point.
///
/// With the recorded orientation, d tau/ds = kappa n, dn/ds = -kappa tau + T b and
/// db/ds = -T n, where T = torsion >= 0 (up to the floor). raw_torsion is the value
/// for b = tau x n.
struct FrenetSample {
  double s = 0.0, t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d tau = Eigen::Vector3d::Zero();
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double kappa = 0.0;
  double torsion = 0.0;
  double raw_torsion = 0.0;
  double dkappa_ds = 0.0;
  double speed = 0.0;
  Orientation orientation = Orientation::positive;
};

/// Throws FrameUndefined when the curvature is below the floor.
FrenetSample frenet_apparatus(const ArcLengthTrajectory& traj, double s);
FrenetSample frenet_at_time(const Trajectory& traj, double t);

/// Curvature of the path from its axial parametrization (r(z), theta(z), z).
double axis_view_curvature(const AxisSample& sample);

/// z-derivatives of the swirl angle along an axial view, with the leading-order
/// expressions evaluated from the velocity:
///   main2 = -v_theta dz(v_z) / v_z^2
///   main3 = -v_theta dzz(v_z) / (r v_z^2) + 2 v_theta dz(v_z)^2 / (r v_z^3)
/// and the remainders theta'' - main2, theta''' - main3.
struct ThetaDerivatives {
  double z = 0.0;
  double r = 0.0;
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
  double main2 = 0.0, main3 = 0.0;
  double remainder2 = 0.0, remainder3 = 0.0;
  double dz_vz = 0.0, dzz_vz = 0.0;
  CylVelocity v;
};
ThetaDerivatives theta_derivatives(const AxisLengthView& view, double z);

/// Rows express (d/dtheta_bar, d/dr_bar, d/dz_bar) of the tube coordinates
/// x = eta(theta_bar) + r_bar n + z_bar b in the frame (tau, n, b).
struct MovingFrameMatrices {
  Eigen::Matrix3d forward;
  Eigen::Matrix3d inverse;
};
/// Needs 1 - kappa r_bar > 0.1.
MovingFrameMatrices moving_frame_matrices(double kappa, double torsion, double r_bar, double z_bar);

/// Tube coordinates of a point: arc length of the nearest path point and the
/// offsets along n and b there.
struct NormalCoordinates {
  double theta_bar = 0.0;
  double r_bar = 0.0;
  double z_bar = 0.0;
  double residual = 0.0;  ///< |eta + r_bar n + z_bar b - x|
  double tube_radius = 0.0;
};
NormalCoordinates normal_coordinates(const ArcLengthTrajectory& traj, const Eigen::Vector3d& x);

}  // namespace axiflow
