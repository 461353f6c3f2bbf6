#include <doctest.h>

#include <cmath>
#include <vector>

#include "axiflow/atlas.hpp"
#include "axiflow/catalog.hpp"
#include "support/oracles.hpp"

using namespace axiflow;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

constexpr double kZin = -20.0;
constexpr double kLambda = 0.25;

double nozzle_r(double r0, double z) { return oracle::nozzle_radius(r0, z, kZin, kLambda); }

}  // namespace

TEST_SUITE("streamline_atlas") {

TEST_CASE("nozzle map matches the closed-form streamlines") {
  const auto f = nozzle_field(InflowProfile::constant(1.0));
  const auto map = build_streamline_map(f, 0.0, linspace(0.05, 0.9, 18), {-2.0, 0.0, 3.0});
  auto gen = oracle::rng(30);
  for (int i = 0; i < 50; ++i) {
    const double r0 = oracle::uniform(gen, 0.05, 0.9);
    const double z = oracle::uniform(gen, kZin, 3.0);
    const MapPartials p = map.partials(r0, z);
    CHECK(p.d_r0[0] == doctest::Approx(nozzle_r(r0, z)).epsilon(1e-7));
    CHECK(p.d_r0[1] == doctest::Approx(nozzle_r(1.0, z)).epsilon(1e-6));
    CHECK(std::abs(p.d_r0[2]) < 1e-4);
    CHECK(p.d_z[1] == doctest::Approx(oracle::d1([&](double x) { return nozzle_r(r0, x); }, z, 1e-3)).epsilon(1e-6).scale(1e-6));
    CHECK(p.d_z[2] == doctest::Approx(oracle::d2([&](double x) { return nozzle_r(r0, x); }, z, 1e-2)).epsilon(1e-5).scale(1e-6));
    CHECK(p.d_z[3] == doctest::Approx(oracle::d3([&](double x) { return nozzle_r(r0, x); }, z, 2e-2)).epsilon(1e-4).scale(1e-5));
    CHECK(p.d_r0_z == doctest::Approx(oracle::d1([&](double x) { return nozzle_r(1.0, x); }, z, 1e-3)).epsilon(1e-6).scale(1e-6));
  }
}

TEST_CASE("inverse map and inflow propagation") {
  const auto f = nozzle_field(InflowProfile::constant(1.0));
  const auto map = build_streamline_map(f, 0.0, linspace(0.05, 0.9, 18), {3.0});
  auto gen = oracle::rng(31);
  for (int i = 0; i < 30; ++i) {
    const double r0 = oracle::uniform(gen, 0.06, 0.89);
    const double z = oracle::uniform(gen, -5.0, 3.0);
    const double r = nozzle_r(r0, z);
    CHECK(map.invert(r, z) == doctest::Approx(r0).epsilon(1e-8));
    const InversePartials ip = map.inverse_partials(r, z);
    auto inv = [&](double rr, double zz) { return rr / nozzle_r(1.0, zz); };
    CHECK(ip.d_r[1] == doctest::Approx(1.0 / nozzle_r(1.0, z)).epsilon(1e-6));
    CHECK(std::abs(ip.d_r[2]) < 1e-4);
    CHECK(ip.d_z[1] == doctest::Approx(oracle::d1([&](double x) { return inv(r, x); }, z, 1e-3)).epsilon(1e-6).scale(1e-6));
    CHECK(ip.d_z[2] == doctest::Approx(oracle::d2([&](double x) { return inv(r, x); }, z, 1e-2)).epsilon(1e-5).scale(1e-6));
    // rho = v_z / g = a(z) / a(z_in).
    const InflowPropagation rho = map.inflow_propagation(r0, z);
    const double a_ratio = oracle::nozzle_area(z, kLambda) / oracle::nozzle_area(kZin, kLambda);
    CHECK(rho.rho == doctest::Approx(a_ratio).epsilon(1e-6));
    CHECK(rho.d_z == doctest::Approx(oracle::d1([&](double x) { return oracle::nozzle_area(x, kLambda); }, z, 1e-3)).epsilon(1e-5).scale(1e-6));
    CHECK(std::abs(rho.d_r0) < 1e-5);
  }
}

TEST_CASE("reconstructed velocity agrees with the field") {
  const auto g = InflowProfile::sinusoidal(1.0, 0.2, 1.0);
  const auto f = nozzle_field(g);
  const double t = 0.4;
  const auto map = build_streamline_map(f, t, linspace(0.02, 0.95, 32), {2.5});
  auto gen = oracle::rng(32);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double z = oracle::uniform(gen, -3.0, 2.5);
    const double r = oracle::uniform(gen, 0.03, 0.94) * nozzle_r(1.0, z);
    const ReconstructedVelocity rv = reconstruct_velocity(map, g.value(t), r, z);
    const CylVelocity v = f->velocity(r, z, t);
    worst = std::max({worst, std::abs(rv.v_r - v.r), std::abs(rv.v_z - v.z)});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("uniform flow has the trivial laminar rates") {
  const auto f = uniform_field(InflowProfile::sinusoidal(1.0, 0.5, 3.0));
  const auto map = build_streamline_map(f, 0.3, {0.2, 0.5, 0.8}, {0.0});
  const LaminarRateX lx = laminar_rate_x(map, 0.5, 0.0);
  CHECK(lx.value == doctest::Approx(2.0).epsilon(1e-12));
  const LaminarRateT lt = laminar_rate_t(f, 0.3, 1e-3, 0.5, 0.0);
  CHECK(lt.value == 0.0);
  CHECK(lt.value_half_step == 0.0);
}

TEST_CASE("laminar rate in space sums the listed terms") {
  const auto f = nozzle_field(InflowProfile::constant(1.0));
  const auto map = build_streamline_map(f, 0.0, linspace(0.3, 0.7, 9), {0.0});
  const LaminarRateX lx = laminar_rate_x(map, 0.5, 0.0);
  const MapPartials p = map.partials(0.5, 0.0);
  const InversePartials ip = map.inverse_partials(p.d_r0[0], 0.0);
  double expect = 0.0;
  for (int k = 1; k <= 3; ++k)
    expect += std::abs(p.d_z[k]) + std::abs(p.d_r0[k]) + std::abs(ip.d_z[k]) + std::abs(ip.d_r[k]);
  CHECK(lx.value == doctest::Approx(expect).epsilon(1e-14));
  CHECK(LaminarRateX::names().size() == 12);
}

TEST_CASE("flux through a streamtube is conserved") {
  const auto f = nozzle_field(InflowProfile::constant(1.3));
  const auto map = build_streamline_map(f, 0.0, linspace(0.1, 0.9, 17), {3.0});
  for (double r0 : {0.3, 0.6, 0.85}) {
    const double inlet = oracle::annulus_flux([&](double r) { return f->velocity(r, kZin, 0.0).z; }, 0.0, r0);
    for (double z : {-1.0, 0.5, 3.0}) {
      const double R = map.R(r0, z);
      const double flux = oracle::annulus_flux([&](double r) { return f->velocity(r, z, 0.0).z; }, 0.0, R);
      CHECK(flux == doctest::Approx(inlet).epsilon(1e-8));
    }
  }
}

TEST_CASE("swirl follows angular momentum transport") {
  const auto f = vortex_nozzle_field(InflowProfile::constant(1.0), 0.3);
  const auto traj = integrate_trajectory(f, {0.6, 0.0, -3.0}, 0.0, 5.0);
  const auto samples = swirl_transport(traj);
  REQUIRE(samples.size() > 2);
  for (const auto& s : samples) CHECK(s.relative_error < 1e-8);
  CHECK(samples.back().field * samples.back().R == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("map errors carry the right kind") {
  const auto f = nozzle_field(InflowProfile::constant(1.0));
  const auto map = build_streamline_map(f, 0.0, {0.2, 0.4, 0.6}, {1.0});
  CHECK_THROWS_AS(map.partials(0.4, 2.0), RangeError);
  CHECK_THROWS_AS(map.partials(0.7, 0.0), RangeError);
  CHECK_THROWS_AS(map.invert(0.95, 0.0), RangeError);

  AtlasOptions o;
  std::vector<StreamlineLine> swapped = {trace_streamline(*f, 0.0, 0.6, kZin, 1.0, o),
                                         trace_streamline(*f, 0.0, 0.3, kZin, 1.0, o)};
  const StreamlineMap bad(f, 0.0, {1.0}, std::move(swapped));
  CHECK_THROWS_AS(bad.invert(0.4, 0.0), StructuralError);

  const auto reversing = make_analytic_field(FieldInfo{.name = "reversing"}, [](auto r, auto z, auto) {
    using S = decltype(r);
    return std::array<S, 3>{S(0.0) * r, S(0.0) * r, z};
  });
  o.z_in = -1.0;
  CHECK_THROWS_AS(build_streamline_map(reversing, 0.0, {0.5}, {1.0}, o), UnilateralViolation);
  CHECK_THROWS_AS(laminar_rate_t(f, 0.0, 0.0, 0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(build_streamline_map(f, 0.0, {0.5, 0.5}, {0.0}), ValidationError);
}

TEST_CASE("threads do not change the map") {
  const auto f = nozzle_field(InflowProfile::constant(1.0));
  AtlasOptions one, four;
  four.threads = 4;
  const auto a = build_streamline_map(f, 0.0, linspace(0.1, 0.9, 9), {2.0}, one);
  const auto b = build_streamline_map(f, 0.0, linspace(0.1, 0.9, 9), {2.0}, four);
  for (double r0 : {0.13, 0.5, 0.77}) CHECK(a.R(r0, 1.5) == b.R(r0, 1.5));
}

TEST_CASE("temporal rate grows with inflow curvature on the swirling nozzle") {
  SwirlNozzleParams p;
  p.lead = 1e-3;
  double previous = -1.0;
  for (double g2 : {1e2, 1e3, 1e4}) {
    const auto g = InflowProfile::quadratic(1.0, 20.0, g2);
    const auto f = swirl_nozzle_field(g, p);
    const LaminarRateT lt = laminar_rate_t(f, 0.0, default_rate_step(g, 0.0), 0.5, 0.0);
    CHECK(lt.value > previous);
    CHECK(lt.step_change <= 1e-3 * lt.value + 1e-10);
    previous = lt.value;
  }
  SwirlNozzleParams still = p;
  still.swirl = 0.0;
  const auto g = InflowProfile::quadratic(1.0, 20.0, 1e4);
  CHECK(laminar_rate_t(swirl_nozzle_field(g, still), 0.0, default_rate_step(g, 0.0), 0.5, 0.0).value == 0.0);
}

}
