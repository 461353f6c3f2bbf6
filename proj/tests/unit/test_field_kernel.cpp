#include <doctest.h>

#include <cmath>

#include "axiflow/catalog.hpp"
#include "axiflow/field_ops.hpp"
#include "support/oracles.hpp"

using namespace axiflow;

namespace {

std::vector<FieldPtr> incompressible_catalog() {
  const auto g = InflowProfile::sinusoidal(1.0, 0.3, 2.0);
  return {uniform_field(g),
          poiseuille_field(1.0, 0.5, 2.0, 1.0),
          rigid_swirl_pulsatile_field(1.5, g, 2.0),
          nozzle_field(g),
          modulated_nozzle_field(g),
          pinch_field(g, 0.3),
          swirling_strain_field(g, 0.5, 1.0),
          sheared_swirl_field(1.0, 0.5, 1.0),
          swirl_nozzle_field(InflowProfile::quadratic(1.0, 5.0, 10.0)),
          womersley_field({})};
}

}  // namespace

TEST_SUITE("field_kernel") {

TEST_CASE("catalog fields are divergence free") {
  auto g = oracle::rng(10);
  for (const auto& f : incompressible_catalog()) {
    CAPTURE(f->name());
    CHECK(f->info().incompressible);
    const Domain& d = f->info().domain;
    for (int i = 0; i < 40; ++i) {
      const double r = oracle::uniform(g, 0.0, 0.95 * d.r_max);
      const double z = oracle::uniform(g, std::max(d.z_min, -3.0), std::min(d.z_max, 3.0));
      const double t = oracle::uniform(g, 0.0, 1.0);
      const double scale = 1.0 + f->velocity(r, z, t).norm();
      CHECK(std::abs(divergence(*f, r, z, t)) < 1e-12 * scale);
    }
  }
  CHECK(divergence(*radial_expansion_field(0.5), 0.3, 0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("velocity jets match difference quotients") {
  auto g = oracle::rng(11);
  for (const auto& f : incompressible_catalog()) {
    CAPTURE(f->name());
    for (int i = 0; i < 5; ++i) {
      const double r = oracle::uniform(g, 0.2, 0.8 * f->info().domain.r_max);
      const double z = oracle::uniform(g, 0.1, 1.0), t = oracle::uniform(g, 0.1, 0.9);
      const VelocityJet j = f->jet(r, z, t);
      auto vz_r = [&](double x) { return f->velocity(x, z, t).z; };
      auto vr_z = [&](double x) { return f->velocity(r, x, t).r; };
      auto vt_t = [&](double x) { return f->velocity(r, z, x).theta; };
      const double h = 1e-3;
      CHECK(j.z.partial(1, 0, 0) == doctest::Approx(oracle::d1(vz_r, r, h)).epsilon(1e-7).scale(1.0));
      CHECK(j.r.partial(0, 2, 0) == doctest::Approx(oracle::d2(vr_z, z, h)).epsilon(1e-6).scale(1.0));
      CHECK(j.theta.partial(0, 0, 1) == doctest::Approx(oracle::d1(vt_t, t, h)).epsilon(1e-7).scale(1.0));
      CHECK(j.z.partial(0, 3, 0) ==
            doctest::Approx(oracle::d3([&](double x) { return f->velocity(r, x, t).z; }, z, 1e-2)).epsilon(1e-3).scale(1.0));
    }
  }
}

TEST_CASE("axis limit follows the parity of the components") {
  const auto f = rigid_swirl_pulsatile_field(2.0, InflowProfile::constant(1.0), 1.0);
  const CylVelocity v = f->velocity(0.0, 0.0, 0.0);
  CHECK(v.r == 0.0);
  CHECK(v.theta == 0.0);
  CHECK(v.z == doctest::Approx(1.0));
  CHECK(divergence(*nozzle_field(InflowProfile::constant(1.0)), 0.0, 0.3, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("domain violations name the bound") {
  const auto f = swirling_strain_field(InflowProfile::constant(1.0), 0.5, 1.0, 0.0);
  CHECK_THROWS_AS(f->velocity(0.5, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(f->velocity(1.5, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(f->velocity(-0.1, 1.0, 0.0), DomainError);
  try {
    f->velocity(0.5, -1.0, 0.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("certification separates exact Euler fields") {
  const auto g = InflowProfile::polynomial({1.0, 0.0, 1.0});
  const auto exact = {rigid_swirl_pulsatile_field(1.0, g, 2.0), swirling_strain_field(g, 0.5, 1.0),
                      uniform_field(g)};
  for (const auto& f : exact) {
    CAPTURE(f->name());
    const auto c = certify_euler(*f, SampleGrid::spanning(*f, 4, 0.0, 2.0));
    CHECK(c.exact);
  }
  const auto sheared = certify_euler(*sheared_swirl_field(1.0, 0.5, 1.0), SampleGrid::spanning(*sheared_swirl_field(1.0, 0.5, 1.0), 4));
  CHECK_FALSE(sheared.exact);
  CHECK(sheared.max_swirl_acceleration > 1e-3);
  const auto nozzle = nozzle_field(InflowProfile::constant(1.0));
  CHECK_FALSE(certify_euler(*nozzle, SampleGrid::spanning(*nozzle, 4)).exact);
}

TEST_CASE("material acceleration of rigid swirl equals minus the pressure gradient") {
  const auto g = InflowProfile::polynomial({1.0, 0.0, 1.0});
  const auto f = rigid_swirl_pulsatile_field(1.3, g, 2.0);
  auto gen = oracle::rng(12);
  for (int i = 0; i < 20; ++i) {
    const double r = oracle::uniform(gen, 0.1, 1.9), z = oracle::uniform(gen, -1, 1), t = oracle::uniform(gen, 0, 2);
    const CylVelocity a = material_acceleration(*f, r, z, t);
    CHECK(a.r == doctest::Approx(-1.3 * 1.3 * r).epsilon(1e-13));
    CHECK(a.theta == doctest::Approx(0.0).scale(1.0));
    CHECK(a.z == doctest::Approx(2.0 * t).epsilon(1e-13));
    const PressureGradient p = f->pressure_gradient(r, z, t);
    CHECK(p.dr == doctest::Approx(-a.r));
    CHECK(p.dz == doctest::Approx(-a.z));
  }
  CHECK_THROWS_AS(nozzle_field(g)->pressure_gradient(0.5, 0.0, 0.0), NotCertified);
}

TEST_CASE("sampled fields reproduce analytic jets") {
  const auto analytic = nozzle_field(InflowProfile::sinusoidal(1.0, 0.2, 1.0));
  SampledVelocityFn fn = [&](double r, double z, double t) { return analytic->velocity(r, z, t); };
  const auto sampled = make_sampled_field({.name = "sampled"}, fn);
  for (double r : {0.0, 0.3, 0.7}) {
    const VelocityJet a = analytic->jet(r, 0.4, 0.2), s = sampled->jet(r, 0.4, 0.2);
    CHECK(s.z.value() == doctest::Approx(a.z.value()).epsilon(1e-14));
    CHECK(s.z.partial(0, 1, 0) == doctest::Approx(a.z.partial(0, 1, 0)).epsilon(1e-6));
    CHECK(s.r.partial(1, 0, 0) == doctest::Approx(a.r.partial(1, 0, 0)).epsilon(1e-5));
    CHECK(s.z.partial(0, 0, 1) == doctest::Approx(a.z.partial(0, 0, 1)).epsilon(1e-6));
  }
}

TEST_CASE("inflow profiles") {
  const auto q = InflowProfile::quadratic(1.0, 50.0, 1e5);
  CHECK(q.value(0.0) == 1.0);
  CHECK(q.rate(0.0) == 50.0);
  CHECK(q.curvature(0.0) == doctest::Approx(1e5));
  CHECK(q.value(0.01) == doctest::Approx(1.0 + 0.5 + 5.0));
  CHECK(q.variation_timescale(0.0) == doctest::Approx(std::min(1.0 / 50.0, std::sqrt(1.0 / 1e5))));
  const auto s = InflowProfile::sinusoidal(1.0, 0.5, 2.0, 0.3);
  CHECK(s.rate(0.7) == doctest::Approx(0.5 * 2.0 * std::cos(2.0 * 0.7 + 0.3)));
  CHECK(s.positive_on(0.0, 10.0));
  CHECK_FALSE(InflowProfile::sinusoidal(0.2, 0.5, 1.0).positive_on(0.0, 10.0));
}

TEST_CASE("womersley profile") {
  WomersleyParams p;
  p.frequency = 4.0;
  const auto f = womersley_field(p);
  for (double t : {0.0, 0.4, 1.3}) {
    CHECK(std::abs(f->velocity(p.radius, 0.0, t).z) < 1e-14);
    for (double r : {0.0, 0.3, 0.8}) CHECK(std::abs(womersley_residual(*f, p, r, t)) < 1e-8);
    // Independent check of the momentum balance by differences.
    for (double r : {0.3, 0.6}) {
      auto u = [&](double rr, double tt) { return f->velocity(rr, 0.0, tt).z; };
      const double h = 1e-3;
      const double ut = oracle::d1([&](double x) { return u(r, x); }, t, h);
      const double ur = oracle::d1([&](double x) { return u(x, t); }, r, h);
      const double urr = oracle::d2([&](double x) { return u(x, t); }, r, h);
      CHECK(ut - p.nu * (urr + ur / r) ==
            doctest::Approx(p.p_s / p.ell + p.p_o * std::cos(p.frequency * t)).epsilon(1e-6).scale(1.0));
    }
  }
  // Quasi-steady limit: the shape tends to the parabola.
  WomersleyParams slow;
  slow.frequency = 1e-4;
  const auto fs = womersley_field(slow);
  CHECK(womersley_number(slow.radius, slow.frequency, slow.nu) < 0.011);
  const double axis = fs->velocity(0.0, 0.0, 0.0).z;
  for (double r : {0.1, 0.5, 0.9})
    CHECK(std::abs(fs->velocity(r, 0.0, 0.0).z / axis - oracle::parabola(r, 1.0)) < 1e-3);
  WomersleyParams fast;
  fast.frequency = 1e3;
  CHECK_THROWS_AS(womersley_field(fast), NumericError);
}

TEST_CASE("catalog registry") {
  CHECK(catalog().size() >= 10);
  const auto f = make_catalog_field("rigid_swirl_pulsatile", {{"omega", 2.0}}, InflowProfile::constant(1.0));
  CHECK(f->velocity(0.5, 0.0, 0.0).theta == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_catalog_field("nope", {}, InflowProfile::constant(1.0)), ValidationError);
  CHECK_THROWS_AS(make_catalog_field("nozzle", {{"omega", 1.0}}, InflowProfile::constant(1.0)), ValidationError);
}

}
