#include <doctest.h>

#include <cmath>

#include "axiflow/taylor.hpp"
#include "support/oracles.hpp"

using namespace axiflow;

TEST_SUITE("taylor") {

TEST_CASE("product of variables gives the expected monomials") {
  using T = Taylor<3>;
  const T r = T::variable(Axis::r, 2.0), z = T::variable(Axis::z, -1.0);
  const T p = r * r * z;  // (2 + x)^2 (-1 + y)
  CHECK(p.value() == doctest::Approx(-4.0));
  CHECK(p.coeff(1, 0, 0) == doctest::Approx(-4.0));
  CHECK(p.coeff(0, 1, 0) == doctest::Approx(4.0));
  CHECK(p.coeff(2, 0, 0) == doctest::Approx(-1.0));
  CHECK(p.coeff(1, 1, 0) == doctest::Approx(4.0));
  CHECK(p.coeff(2, 1, 0) == doctest::Approx(1.0));
  CHECK(p.coeff(0, 0, 1) == 0.0);
}

TEST_CASE("elementary functions match difference quotients") {
  auto g = oracle::rng(1);
  using S = Series<3>;
  const std::pair<std::function<S(const S&)>, std::function<double(double)>> cases[] = {
      {[](const S& x) { return exp(x); }, [](double x) { return std::exp(x); }},
      {[](const S& x) { return sin(x); }, [](double x) { return std::sin(x); }},
      {[](const S& x) { return cos(x); }, [](double x) { return std::cos(x); }},
      {[](const S& x) { return sinh(x); }, [](double x) { return std::sinh(x); }},
      {[](const S& x) { return cosh(x); }, [](double x) { return std::cosh(x); }},
      {[](const S& x) { return tanh(x); }, [](double x) { return std::tanh(x); }},
      {[](const S& x) { return sech2(x); }, [](double x) { return 1.0 / std::pow(std::cosh(x), 2); }},
      {[](const S& x) { return log(x); }, [](double x) { return std::log(x); }},
      {[](const S& x) { return pow(x, 2.5); }, [](double x) { return std::pow(x, 2.5); }},
      {[](const S& x) { return sqrt(x); }, [](double x) { return std::sqrt(x); }},
      {[](const S& x) { return 1.0 / x; }, [](double x) { return 1.0 / x; }},
  };
  for (int trial = 0; trial < 20; ++trial) {
    const double x = oracle::uniform(g, 0.3, 2.0);
    for (const auto& [series, plain] : cases) {
      const S s = series(S::variable(x));
      CHECK(s.derivative(0) == doctest::Approx(plain(x)).epsilon(1e-14));
      CHECK(s.derivative(1) == doctest::Approx(oracle::d1(plain, x, 1e-3)).epsilon(1e-8));
      CHECK(s.derivative(2) == doctest::Approx(oracle::d2(plain, x, 1e-3)).epsilon(1e-6));
      CHECK(s.derivative(3) == doctest::Approx(oracle::d3(plain, x, 1e-2)).epsilon(1e-3));
    }
  }
}

TEST_CASE("partials of a composite jet match nested differences") {
  auto f = [](double r, double z, double t) { return std::exp(r * z) * std::sin(t + r) / (1.0 + z * z); };
  using T = Taylor<3>;
  auto g = oracle::rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const double r = oracle::uniform(g, 0.1, 1.0), z = oracle::uniform(g, -1, 1), t = oracle::uniform(g, 0, 2);
    const T R = T::variable(Axis::r, r), Z = T::variable(Axis::z, z), Tt = T::variable(Axis::t, t);
    const T j = exp(R * Z) * sin(Tt + R) / (1.0 + Z * Z);
    const double h = 1e-3;
    CHECK(j.partial(1, 0, 0) == doctest::Approx(oracle::d1([&](double x) { return f(x, z, t); }, r, h)).epsilon(1e-9));
    CHECK(j.partial(0, 2, 0) == doctest::Approx(oracle::d2([&](double x) { return f(r, x, t); }, z, h)).epsilon(1e-7));
    CHECK(j.partial(0, 0, 3) == doctest::Approx(oracle::d3([&](double x) { return f(r, z, x); }, t, 1e-2)).epsilon(1e-3));
    const double mixed = oracle::d1([&](double x) { return oracle::d1([&](double y) { return f(x, y, t); }, z, h); }, r, h);
    CHECK(j.partial(1, 1, 0) == doctest::Approx(mixed).epsilon(1e-7));
    // diff and truncate agree with partial
    CHECK(j.diff(Axis::z).partial(1, 0, 0) == doctest::Approx(j.partial(1, 1, 0)).epsilon(1e-13));
    CHECK(j.truncate<1>().partial(0, 0, 1) == doctest::Approx(j.partial(0, 0, 1)).epsilon(1e-13));
  }
}

TEST_CASE("substitute, revert and integrate are consistent") {
  using S = Series<4>;
  auto g = oracle::rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    S s;
    s[1] = oracle::uniform(g, 0.5, 2.0);
    for (int k = 2; k <= 4; ++k) s[k] = oracle::uniform(g, -1, 1);
    const S inv = revert(s);
    const S id = substitute(s, inv);
    CHECK(id[0] == doctest::Approx(0.0));
    CHECK(id[1] == doctest::Approx(1.0).epsilon(1e-13));
    for (int k = 2; k <= 4; ++k) CHECK(std::abs(id[k]) < 1e-12);
    const S back = differentiate(integrate(s, 3.0));
    for (int k = 0; k < 4; ++k) CHECK(back[k] == doctest::Approx(s[k]).epsilon(1e-14));
  }
}

TEST_CASE("along evaluates a jet on a curve") {
  using T = Taylor<3>;
  using S = Series<3>;
  const T R = T::variable(Axis::r, 0.5), Z = T::variable(Axis::z, 0.2), Tt = T::variable(Axis::t, 0.1);
  const T j = R * R * Z + Tt;
  const S h = S::variable(0.0);
  const S v = along(j, 2.0 * h, h * h, h);  // (0.5 + 2h)^2 (0.2 + h^2) + 0.1 + h
  CHECK(v[0] == doctest::Approx(0.25 * 0.2 + 0.1));
  CHECK(v[1] == doctest::Approx(2 * 0.5 * 2 * 0.2 + 1.0));
  CHECK(v[2] == doctest::Approx(4 * 0.2 + 0.25));
  CHECK(v[3] == doctest::Approx(2 * 0.5 * 2));
}

}
