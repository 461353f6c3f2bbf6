#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "axiflow/field_ops.hpp"
#include "axiflow/frenet.hpp"
#include "axiflow/trajectory.hpp"

namespace axiflow {

/// Steps for the finite differences behind the identity checks. Zero picks the default:
/// time 5e-3 of |u| / |Du/Dt| at the probe, space 1e-4 / kappa clamped to [1e-7, 1e-2].
struct IdentitySteps {
  double time = 0.0;
  double space = 0.0;
  double tolerance = 1e-4;  ///< on the relative residual
  double slope_lo = 1.8, slope_hi = 2.2;
};

/// One identity lhs = rhs, evaluated with the finite-difference side at step h, h/2, h/4.
struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;       ///< at step h
  double absolute = 0.0;  ///< |lhs - rhs| at step h
  double scale = 0.0;
  double relative = 0.0;  ///< absolute / max(scale, 1e-300)
  std::array<double, 3> steps{};
  std::array<double, 3> residuals{};  ///< signed lhs - rhs per step
  /// Observed order log2(|r(h) - r(h/2)| / |r(h/2) - r(h/4)|); empty when both
  /// differences sit at rounding level (the difference quotient is exact).
  std::optional<double> slope;
  bool pass = false;

  friend bool operator==(const IdentityCheck&, const IdentityCheck&) = default;
};

/// Residuals of the pressure identities along a trajectory, with G = -grad p:
///   tau:  G.tau = d|u|/dt
///   n:    G.n = (d^2 eta/dt^2).n, which equals kappa |u|^2
///   rbar: 3 kappa d|u|/dt + d_s kappa |u|^2 = d_n F
///   zbar: T kappa |u|^2 = d_b F
/// where F(x) = (u . Du/Dt) / |u| is the rate of |u| along the path through x at time t.
/// The frozen checks replace F by G . tau with tau held at the probe:
///   frozen_n: 3 kappa d|u|/dt + d_s kappa |u|^2 - (d_t G . n) / |u| = d_n (G . tau)
///   frozen_b: T kappa |u|^2 - (d_t G . b) / |u| = d_b (G . tau)
struct IdentityReport {
  std::string field;
  double t = 0.0;
  double s = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double kappa = 0.0;
  double torsion = 0.0;
  double dkappa_ds = 0.0;
  double speed = 0.0;
  double speed_rate = 0.0;  ///< analytic d|u|/dt
  double time_step = 0.0;
  double space_step = 0.0;
  double tolerance = 0.0;
  std::array<IdentityCheck, 4> identities;  ///< tau, n, rbar, zbar
  std::array<IdentityCheck, 2> frozen;      ///< frozen_n, frozen_b
  bool pass = false;                        ///< all four identities

  friend bool operator==(const IdentityReport&, const IdentityReport&) = default;
};

/// Throws NotCertified without an attached pressure gradient and FrameUndefined on a
/// straight stretch.
IdentityReport check_pressure_identities(const FieldPtr& field, const Trajectory& traj, double t,
                                         const IdentitySteps& steps = {});

/// The azimuthal balance
///   3 (e_theta.n)(kappa d|u|/dt + d_s kappa |u|^2) + (e_theta.b) T kappa |u|^2
/// next to the grouping 3 (e_theta.n) kappa d|u|/dt + (e_theta.n) d_s kappa |u|^2 + ...,
/// the lower bound (3/2)|d_s kappa| |u|^2 - 3 kappa |d|u|/dt| - T kappa |u|^2 and the
/// two-sided angular difference of F at the probe.
struct RotationBalance {
  bool applicable = false;
  bool degenerate = false;
  std::string detail;
  Certification certification;
  double e_theta_n = 0.0, e_theta_b = 0.0;
  double rate_term = 0.0;       ///< kappa d|u|/dt
  double curvature_term = 0.0;  ///< d_s kappa |u|^2
  double torsion_term = 0.0;    ///< T kappa |u|^2
  double balance = 0.0;
  double balance_alternative = 0.0;
  double lower_bound = 0.0;
  double angular_derivative = 0.0;  ///< (1/R) dF/dtheta by central differences
  double angle_step = 0.0;
  /// Largest of |d_s kappa| |u|^2 / 2 and the three balance terms, plus 1e-300.
  double scale = 0.0;
  double normalized = 0.0;           ///< |balance| / scale
  double normalized_alternative = 0.0;
  double agreement = 0.0;  ///< |balance - angular_derivative| / scale
};
RotationBalance rotation_balance(const FieldPtr& field, const Trajectory& traj, double t);

/// Parameters of the instability scan; also bounds the seed swirl in key_inequalities.
struct ScanParams {
  double epsilon = 0.5;
  double beta = 2.0;
  double delta = 0.1;
  std::vector<double> g0{1.0};
  std::vector<double> g1{20.0, 50.0, 100.0, 200.0, 500.0};
  std::vector<double> g2{1e4, 1e5, 1e6, 1e7};
  struct SeedPoint {
    double r0 = 0.8;  ///< inlet radius
    double z = 0.0;
  };
  std::vector<SeedPoint> seeds{SeedPoint{}};
  double swirl = 1.0;
  double swirl_lo = 0.5, swirl_hi = 2.0;  ///< admissible u0 . e_theta when swirl != 0
  double lambda0 = 0.5;
  double coupling = 1e-3;
  double lead = 1e-6;
  double dt = 0.0;  ///< temporal-rate step; 0 picks default_rate_step
  unsigned threads = 1;
};

enum class Verdict { holds, fails, degenerate };
const char* to_string(Verdict v);

/// Margins (left minus right) of
///   (1/6)|u|^2 |d_s kappa| > kappa d|u|/dt
///   (1/2)|d_s kappa| > |kappa T (b.e_theta)|
///   -1 <= n.e_theta < -1/2   (margin: -1/2 - n.e_theta, and n.e_theta + 1)
struct KeyInequalities {
  Verdict verdict = Verdict::degenerate;
  std::string detail;
  double speed = 0.0, speed_rate = 0.0;
  double kappa = 0.0, torsion = 0.0, dkappa_ds = 0.0;
  double n_e_theta = 0.0, b_e_theta = 0.0;
  double u_theta = 0.0;
  bool swirl_in_band = false;
  std::array<double, 3> margins{};
  double lower_margin = 0.0;  ///< n.e_theta + 1

  friend bool operator==(const KeyInequalities&, const KeyInequalities&) = default;
};
KeyInequalities key_inequalities(const FieldPtr& field, const Trajectory& traj, double t,
                                 const ScanParams& params = {});

}  // namespace axiflow
