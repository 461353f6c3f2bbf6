#include <doctest.h>

#include <cmath>

#include "axiflow/catalog.hpp"
#include "axiflow/frenet.hpp"
#include "support/oracles.hpp"

using namespace axiflow;

namespace {

oracle::V3 v3(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

ArcLengthTrajectory helix(double omega, double c, double r0, double t1, double r_max = 2.0) {
  const auto f = rigid_swirl_pulsatile_field(omega, InflowProfile::constant(c), r_max);
  return reparametrize_arclength(integrate_trajectory(f, {r0, 0.0, 0.0}, 0.0, t1, {1e-12, 1e-14}));
}

ArcLengthTrajectory swirl_path() {
  const auto f = swirl_nozzle_field(InflowProfile::constant(1.0));
  return reparametrize_arclength(integrate_trajectory(f, {0.8, 0.0, -2.0}, 0.0, 4.0, {1e-12, 1e-14}));
}

}  // namespace

TEST_SUITE("frenet_frames") {

TEST_CASE("helix has constant curvature and torsion") {
  auto gen = oracle::rng(40);
  for (int i = 0; i < 8; ++i) {
    const double omega = oracle::uniform(gen, 0.5, 2.0), c = oracle::uniform(gen, -1.0, 1.0);
    const double r0 = oracle::uniform(gen, 0.3, 1.5);
    const auto arc = helix(omega, c, r0, 3.0);
    const double b = c / omega;
    const FrenetSample f = frenet_apparatus(arc, 0.4 * arc.length());
    CHECK(f.kappa == doctest::Approx(oracle::helix_curvature(r0, b)).epsilon(1e-9));
    CHECK(f.torsion == doctest::Approx(std::abs(oracle::helix_torsion(r0, b))).epsilon(1e-8).scale(1e-9));
    CHECK(f.raw_torsion == doctest::Approx(oracle::helix_torsion(r0, b) * (omega > 0 ? 1 : -1)).epsilon(1e-8).scale(1e-9));
    CHECK(f.torsion >= 0.0);
    CHECK(std::abs(f.dkappa_ds) < 1e-8);
    // The principal normal points at the axis.
    const Eigen::Vector3d e_r(f.position.x(), f.position.y(), 0.0);
    CHECK(f.n.dot(e_r.normalized()) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(f.tau.cross(f.n).dot(f.b) == doctest::Approx(static_cast<int>(f.orientation)).epsilon(1e-12));
  }
}

TEST_CASE("planar circle and straight line") {
  const auto arc = helix(1.0, 0.0, 2.0, 3.0, 3.0);
  const FrenetSample f = frenet_apparatus(arc, 1.0);
  CHECK(f.kappa == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(f.torsion) < 1e-9);
  CHECK(f.orientation == Orientation::positive);

  const auto line = reparametrize_arclength(
      integrate_trajectory(uniform_field(InflowProfile::constant(1.0)), {0.5, 0.0, 0.0}, 0.0, 1.0));
  CHECK_THROWS_AS(frenet_apparatus(line, 0.5), FrameUndefined);
}

TEST_CASE("curvature and torsion agree with differences of the path") {
  const auto arc = swirl_path();
  const Trajectory& traj = arc.trajectory();
  for (double t : {0.5, 1.7, 2.6, 3.3}) {
    oracle::V3 d1v, d2v, d3v;
    for (int k = 0; k < 3; ++k) {
      auto x = [&](double tt) { return traj.position(tt)[k]; };
      d1v[k] = oracle::d1(x, t, 1e-2);
      d2v[k] = oracle::d2(x, t, 1e-2);
      d3v[k] = oracle::d3(x, t, 3e-2);
    }
    const auto kt = oracle::curvature_torsion(d1v, d2v, d3v);
    const FrenetSample f = frenet_at_time(traj, t);
    CHECK(f.kappa == doctest::Approx(kt[0]).epsilon(1e-4));
    CHECK(f.raw_torsion == doctest::Approx(kt[1]).epsilon(1e-4));
    CHECK(f.torsion == doctest::Approx(std::abs(kt[1])).epsilon(1e-4));
  }
}

TEST_CASE("Frenet-Serret equations hold along a swirling path") {
  const auto arc = swirl_path();
  for (double frac : {0.2, 0.5, 0.8}) {
    const double s = frac * arc.length();
    const FrenetSample f = frenet_apparatus(arc, s);
    const double h = 1e-3;
    for (int k = 0; k < 3; ++k) {
      const double dtau = oracle::d1([&](double x) { return frenet_apparatus(arc, x).tau[k]; }, s, h);
      const double dn = oracle::d1([&](double x) { return frenet_apparatus(arc, x).n[k]; }, s, h);
      const double db = oracle::d1([&](double x) { return frenet_apparatus(arc, x).b[k]; }, s, h);
      CHECK(dtau == doctest::Approx(f.kappa * f.n[k]).epsilon(1e-6).scale(1e-3));
      CHECK(dn == doctest::Approx(-f.kappa * f.tau[k] + f.torsion * f.b[k]).epsilon(1e-6).scale(1e-3));
      CHECK(db == doctest::Approx(-f.torsion * f.n[k]).epsilon(1e-6).scale(1e-3));
    }
    const double dk = oracle::d1([&](double x) { return frenet_apparatus(arc, x).kappa; }, s, h);
    CHECK(f.dkappa_ds == doctest::Approx(dk).epsilon(1e-6).scale(1e-3));
    CHECK(oracle::norm(oracle::cross(v3(f.tau), v3(f.n))) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("moving-frame matrices") {
  const auto m0 = moving_frame_matrices(0.7, 0.3, 0.0, 0.0);
  CHECK((m0.forward - Eigen::Matrix3d::Identity()).norm() < 1e-15);
  CHECK((m0.inverse - Eigen::Matrix3d::Identity()).norm() < 1e-15);

  auto gen = oracle::rng(41);
  for (int i = 0; i < 50; ++i) {
    const double kappa = oracle::uniform(gen, 0.0, 2.0), torsion = oracle::uniform(gen, 0.0, 2.0);
    const double rb = oracle::uniform(gen, -0.4, 0.4), zb = oracle::uniform(gen, -0.4, 0.4);
    const auto m = moving_frame_matrices(kappa, torsion, rb, zb);
    oracle::Mat3 fm;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) fm[r][c] = m.forward(r, c);
    const auto inv = oracle::inverse3(fm);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(std::abs(m.inverse(r, c) - inv[r][c]) < 1e-14 * (1 + std::abs(inv[r][c])));
    CHECK((m.forward * m.inverse - Eigen::Matrix3d::Identity()).norm() < 1e-14);
  }
  CHECK_THROWS_AS(moving_frame_matrices(2.0, 0.0, 0.46, 0.0), DomainError);

  // The first row is d x / d theta_bar of eta + r_bar n + z_bar b, expressed in (tau, n, b).
  const auto arc = helix(1.0, 0.6, 1.0, 6.0);
  const double s = 2.0, rb = 0.12, zb = -0.08;
  const FrenetSample f = frenet_apparatus(arc, s);
  const auto m = moving_frame_matrices(f.kappa, f.torsion, rb, zb);
  for (int k = 0; k < 3; ++k) {
    const double dx = oracle::d1([&](double x) {
      const FrenetSample g = frenet_apparatus(arc, x);
      return (g.position + rb * g.n + zb * g.b)[k];
    }, s, 1e-3);
    const double expect = m.forward(0, 0) * f.tau[k] + m.forward(0, 1) * f.n[k] + m.forward(0, 2) * f.b[k];
    CHECK(dx == doctest::Approx(expect).epsilon(1e-8).scale(1e-3));
  }
}

TEST_CASE("tube coordinates") {
  const auto arc = helix(1.0, 1.0, 1.0, 4.0);
  const double s = 0.45 * arc.length();
  const FrenetSample f = frenet_apparatus(arc, s);
  const NormalCoordinates on = normal_coordinates(arc, f.position);
  CHECK(on.theta_bar == doctest::Approx(s).epsilon(1e-8));
  CHECK(std::abs(on.r_bar) < 1e-9);
  CHECK(std::abs(on.z_bar) < 1e-9);

  const NormalCoordinates off = normal_coordinates(arc, f.position + 0.1 * f.n);
  CHECK(off.theta_bar == doctest::Approx(s).epsilon(1e-8));
  CHECK(off.r_bar == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(std::abs(off.z_bar) < 1e-9);
  CHECK(off.tube_radius == doctest::Approx(1.0 / oracle::helix_curvature(1.0, 1.0)).epsilon(1e-8));

  auto gen = oracle::rng(42);
  for (int i = 0; i < 10; ++i) {
    const double si = oracle::uniform(gen, 0.2, 0.8) * arc.length();
    const double rb = oracle::uniform(gen, -0.3, 0.3), zb = oracle::uniform(gen, -0.3, 0.3);
    const FrenetSample g = frenet_apparatus(arc, si);
    const NormalCoordinates nc = normal_coordinates(arc, g.position + rb * g.n + zb * g.b);
    CHECK(nc.theta_bar == doctest::Approx(si).epsilon(1e-8));
    CHECK(nc.r_bar == doctest::Approx(rb).epsilon(1e-8));
    CHECK(nc.z_bar == doctest::Approx(zb).epsilon(1e-8));
    CHECK(nc.residual < 1e-9);
  }
  CHECK_THROWS_AS(normal_coordinates(arc, Eigen::Vector3d(10.0, 0.0, 0.0)), DomainError);

  // Tight helix: a point between two turns is equally close to both.
  const auto tight = helix(1.0, 0.1, 1.0, 6.0 * M_PI);
  CHECK_THROWS_AS(normal_coordinates(tight, Eigen::Vector3d(1.0, 0.0, 0.3 * M_PI)), AmbiguityError);
}

TEST_CASE("swirl-angle derivatives along the axis") {
  // g = 1 + 2t, omega = 1, r0 = 1: theta' = 1/g, theta'' = -2 and theta''' = 12 at t = 0.
  const auto f = rigid_swirl_pulsatile_field(1.0, InflowProfile::polynomial({1.0, 2.0}), 2.0);
  const auto traj = integrate_trajectory(f, {1.0, 0.0, -0.16}, -0.2, 0.5, {1e-12, 1e-14});
  const AxisLengthView view = axis_length_view(traj);
  const ThetaDerivatives d = theta_derivatives(view, 0.0);
  CHECK(d.theta1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.theta2 == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(d.theta3 == doctest::Approx(12.0).epsilon(1e-7));
  CHECK(d.main2 == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(d.main3 == doctest::Approx(12.0).epsilon(1e-7));
  CHECK(std::abs(d.remainder2) < 1e-7);

  // Slowing inflow turns the sign.
  const auto slow = rigid_swirl_pulsatile_field(1.0, InflowProfile::polynomial({1.0, -0.5}), 2.0);
  const auto st = integrate_trajectory(slow, {1.0, 0.0, 0.0}, 0.0, 0.5);
  CHECK(theta_derivatives(axis_length_view(st), 0.2).theta2 > 0.0);

  const auto steady = rigid_swirl_pulsatile_field(1.0, InflowProfile::constant(1.5), 2.0);
  const auto sv = axis_length_view(integrate_trajectory(steady, {0.7, 0.0, 0.0}, 0.0, 1.0));
  const ThetaDerivatives z = theta_derivatives(sv, 0.5);
  CHECK(std::abs(z.theta2) < 1e-12);
  CHECK(std::abs(z.main2) < 1e-12);
  CHECK(std::abs(z.theta3) < 1e-12);
}

TEST_CASE("axial-view curvature equals the Frenet curvature") {
  const auto arc = swirl_path();
  const AxisLengthView view = axis_length_view(arc.trajectory());
  for (double z : {-1.0, 0.0, 1.0}) {
    const double k = axis_view_curvature(view.at(z));
    CHECK(k == doctest::Approx(frenet_at_time(arc.trajectory(), view.t_of_z(z)).kappa).epsilon(1e-9));
  }
}

}
