#include "axiflow/catalog.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace axiflow {

namespace {

template <class S>
using Vel = std::array<S, 3>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be positive");
}

}  // namespace

FieldPtr uniform_field(InflowProfile g) {
  FieldInfo info{.name = "uniform"};
  auto fn = [g](auto r, auto, auto t) {
    using S = decltype(r);
    return Vel<S>{S(0.0), S(0.0), g(t)};
  };
  auto grad = [g](double, double, double t) { return PressureGradient{0.0, -g.rate(t)}; };
  return make_analytic_field(info, fn, grad);
}

FieldPtr poiseuille_field(double p_s, double nu, double ell, double radius) {
  require_positive(nu, "viscosity");
  require_positive(ell, "pipe length");
  require_positive(radius, "pipe radius");
  FieldInfo info{.name = "poiseuille", .domain = {.r_max = radius}, .no_penetration = true};
  const double k = p_s / (4.0 * nu * ell);
  auto fn = [k, radius](auto r, auto, auto) {
    using S = decltype(r);
    return Vel<S>{S(0.0), S(0.0), k * (radius * radius - r * r)};
  };
  return make_analytic_field(info, fn);
}

FieldPtr rigid_swirl_pulsatile_field(double omega, InflowProfile g, double r_max) {
  require_positive(r_max, "r_max");
  FieldInfo info{.name = "rigid_swirl_pulsatile", .domain = {.r_max = r_max}, .no_penetration = true};
  auto fn = [omega, g](auto r, auto, auto t) {
    using S = decltype(r);
    return Vel<S>{S(0.0), omega * r, g(t)};
  };
  auto grad = [omega, g](double r, double, double t) {
    return PressureGradient{omega * omega * r, -g.rate(t)};
  };
  return make_analytic_field(info, fn, grad);
}

FieldPtr nozzle_field(InflowProfile g) {
  FieldInfo info{.name = "nozzle"};
  auto fn = [g](auto r, auto z, auto t) {
    using std::tanh;
    using S = decltype(r);
    const S a = 1.0 + (1.0 + tanh(z)) / 4.0;
    const S da = sech2(z) / 4.0;
    const S gt = g(t);
    return Vel<S>{-0.5 * gt * r * da, S(0.0), gt * a};
  };
  auto slope = [](auto r, auto z, auto) {
    using std::tanh;
    return -0.5 * r * (sech2(z) / 4.0) / (1.0 + (1.0 + tanh(z)) / 4.0);
  };
  return make_analytic_field_with_slope(info, fn, slope);
}

FieldPtr modulated_nozzle_field(InflowProfile g) {
  FieldInfo info{.name = "modulated_nozzle"};
  auto fn = [g](auto r, auto z, auto t) {
    using std::sin;
    using std::tanh;
    using S = decltype(r);
    const S m = (1.0 + 0.5 * sin(t)) / 8.0;
    const S a = 1.0 + (1.0 + tanh(z)) * m;
    const S da = sech2(z) * m;
    const S gt = g(t);
    return Vel<S>{-0.5 * gt * r * da, S(0.0), gt * a};
  };
  auto slope = [](auto r, auto z, auto t) {
    using std::sin;
    using std::tanh;
    const auto m = (1.0 + 0.5 * sin(t)) / 8.0;
    return -0.5 * r * sech2(z) * m / (1.0 + (1.0 + tanh(z)) * m);
  };
  return make_analytic_field_with_slope(info, fn, slope);
}

FieldPtr pinch_field(InflowProfile g, double eps) {
  if (!(std::abs(eps) < 1.0)) throw ValidationError("pinch strength must satisfy |eps| < 1");
  FieldInfo info{.name = "pinch", .no_penetration = true};
  auto psi = [g, eps](auto r, auto z, auto t) {
    return 0.5 * g(t) * r * r * (1.0 + eps * (1.0 - r * r) * sech2(z));
  };
  auto swirl = [](auto r, auto, auto) { return 0.0 * r; };
  return make_stream_function_field(info, psi, swirl);
}

FieldPtr vortex_nozzle_field(InflowProfile g, double circulation) {
  FieldInfo info{.name = "vortex_nozzle", .parity = AxisParity::none};
  auto fn = [g, circulation](auto r, auto z, auto t) {
    using std::tanh;
    using S = decltype(r);
    const S a = 1.0 + (1.0 + tanh(z)) / 4.0;
    const S gt = g(t);
    return Vel<S>{-0.5 * gt * r * sech2(z) / 4.0, circulation / r, gt * a};
  };
  return make_analytic_field(info, fn);
}

FieldPtr swirling_strain_field(InflowProfile g, double gamma, double omega0, double z_min) {
  FieldInfo info{.name = "swirling_strain", .domain = {.z_min = z_min}};
  auto fn = [g, gamma, omega0](auto r, auto z, auto t) {
    using std::exp;
    using S = decltype(r);
    return Vel<S>{-0.5 * gamma * r, omega0 * exp(gamma * t) * r, g(t) + gamma * z};
  };
  auto grad = [g, gamma, omega0](double r, double z, double t) {
    const double w = omega0 * std::exp(gamma * t);
    return PressureGradient{w * w * r - 0.25 * gamma * gamma * r,
                            -g.rate(t) - gamma * (g.value(t) + gamma * z)};
  };
  return make_analytic_field(info, fn, grad);
}

FieldPtr sheared_swirl_field(double omega0, double omega1, double axial) {
  FieldInfo info{.name = "sheared_swirl"};
  auto fn = [=](auto r, auto z, auto) {
    using std::tanh;
    using S = decltype(r);
    return Vel<S>{S(0.0), (omega0 + omega1 * tanh(z)) * r, S(axial)};
  };
  return make_analytic_field(info, fn);
}

FieldPtr radial_expansion_field(double rate) {
  FieldInfo info{.name = "radial_expansion", .incompressible = false};
  auto fn = [rate](auto r, auto, auto) {
    using S = decltype(r);
    return Vel<S>{rate * r, S(0.0), S(0.0)};
  };
  return make_analytic_field(info, fn);
}

FieldPtr swirl_nozzle_field(InflowProfile g, const SwirlNozzleParams& p) {
  FieldInfo info{.name = "swirl_nozzle"};
  const double g0 = g.value(0.0), dg0 = g.rate(0.0);
  if (g0 == 0.0) throw ValidationError("swirl_nozzle needs g(0) != 0");
  const double gain = p.coupling * p.swirl / g0;
  auto lambda = [=](const auto& t) {
    return p.lambda0 + gain * ((g(t) - g0) + p.lead * (g.rate_of(t) - dg0));
  };
  auto fn = [=](auto r, auto z, auto t) {
    using std::tanh;
    using S = decltype(r);
    const S lam = lambda(t);
    const S a = 1.0 + 0.5 * lam * (1.0 + tanh(z));
    const S da = 0.5 * lam * sech2(z);
    const S gt = g(t);
    return Vel<S>{-0.5 * gt * r * da, p.swirl * r * a, gt * a};
  };
  auto slope = [=](auto r, auto z, auto t) {
    using std::tanh;
    const auto lam = lambda(t);
    return -0.5 * r * (0.5 * lam * sech2(z)) / (1.0 + 0.5 * lam * (1.0 + tanh(z)));
  };
  return make_analytic_field_with_slope(info, fn, slope);
}

// ---------------------------------------------------------------------------

double womersley_number(double radius, double frequency, double nu) {
  require_positive(nu, "viscosity");
  return radius * std::sqrt(frequency / nu);
}

std::array<std::complex<double>, 4> bessel_j0(std::complex<double> x) {
  if (std::abs(x) > 20.0 * (1.0 + 1e-12))
    throw NumericError("Bessel series limited to |x| <= 20");
  using C = std::complex<double>;
  std::array<C, 4> sum{};
  // Term k of J0 is c_k x^(2k) with c_k = (-1)^k / (4^k (k!)^2).
  double ck = 1.0;
  std::array<C, 4> term{};
  std::vector<C> pw{C(1.0)};
  for (int k = 0; k < 400; ++k) {
    while (static_cast<int>(pw.size()) <= 2 * k) pw.push_back(pw.back() * x);
    if (k > 0) ck *= -1.0 / (4.0 * k * k);
    const int p = 2 * k;
    for (int m = 0; m < 4; ++m) {
      if (p - m < 0) {
        term[m] = 0.0;
        continue;
      }
      double falling = 1.0;
      for (int i = 0; i < m; ++i) falling *= (p - i);
      term[m] = ck * falling * pw[p - m];
      sum[m] += term[m];
    }
    if (k > std::abs(x)) {
      bool small = true;
      for (int m = 0; m < 4; ++m)
        if (std::abs(term[m]) > 1e-16 * std::max(std::abs(sum[m]), 1e-300)) small = false;
      if (small) return sum;
    }
  }
  throw NumericError("Bessel series did not converge");
}

namespace {

std::complex<double> ipow(std::complex<double> x, int n) {
  std::complex<double> out(1.0);
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

class WomersleyField final : public Field {
 public:
  explicit WomersleyField(const WomersleyParams& p)
      : Field(FieldInfo{.name = "womersley", .domain = {.r_max = p.radius}, .no_penetration = true}),
        p_(p) {
    require_positive(p.radius, "pipe radius");
    require_positive(p.frequency, "frequency");
    require_positive(p.ell, "pipe length");
    const double alpha = womersley_number(p.radius, p.frequency, p.nu);
    if (alpha > 20.0) {
      std::ostringstream os;
      os << "Womersley number " << alpha << " exceeds the series limit 20";
      throw NumericError(os.str());
    }
    using namespace std::complex_literals;
    lambda_ = std::exp(0.75i * M_PI) * std::sqrt(p.frequency / p.nu);
    amplitude_ = p.p_o / (1i * p.frequency);
    wall_ = bessel_j0(lambda_ * p.radius)[0];
    steady_ = p.p_s / (4.0 * p.nu * p.ell);
  }

 protected:
  CylVelocity raw_velocity(double r, double, double t) const override {
    return {0.0, 0.0, axial(r, t, 0, 0)};
  }
  VelocityJet raw_jet(double r, double, double t) const override {
    VelocityJet j;
    Taylor<3>::for_each_monomial<3>([&](int a, int b, int c) {
      if (b == 0) j.z.coeff(a, 0, c) = axial(r, t, a, c) / (detail::factorial(a) * detail::factorial(c));
    });
    return j;
  }

 private:
  // d^a/dr^a d^c/dt^c of the axial velocity.
  double axial(double r, double t, int a, int c) const {
    using namespace std::complex_literals;
    const auto J = bessel_j0(lambda_ * r);
    // (wall - J) vanishes exactly at r = radius, keeping no-slip free of rounding.
    const std::complex<double> U = a == 0 ? amplitude_ * (wall_ - J[0]) / wall_
                                          : -amplitude_ * ipow(lambda_, a) * J[a] / wall_;
    const std::complex<double> w = 1i * p_.frequency;
    double v = std::real(U * ipow(w, c) * std::exp(w * t));
    if (c == 0) {
      const double R = p_.radius;
      const double s[4] = {steady_ * (R * R - r * r), -2.0 * steady_ * r, -2.0 * steady_, 0.0};
      v += s[a];
    }
    return v;
  }

  WomersleyParams p_;
  std::complex<double> lambda_, amplitude_, wall_;
  double steady_ = 0.0;
};

}  // namespace

FieldPtr womersley_field(const WomersleyParams& params) {
  return std::make_shared<WomersleyField>(params);
}

double womersley_residual(const Field& field, const WomersleyParams& p, double r, double t) {
  const VelocityJet j = field.jet(r, 0.0, t);
  const double ut = j.z.partial(0, 0, 1);
  const double ur = j.z.partial(1, 0, 0);
  const double urr = j.z.partial(2, 0, 0);
  // On the axis u_r / r tends to u_rr.
  const double laplacian = r > kAxisFloor ? urr + ur / r : 2.0 * urr;
  return ut - p.nu * laplacian - (p.p_s / p.ell + p.p_o * std::cos(p.frequency * t));
}

// ---------------------------------------------------------------------------

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"uniform", "v = (0, 0, g)", {}, true},
      {"poiseuille", "steady pipe profile", {{"p_s", 4.0}, {"nu", 1.0}, {"ell", 1.0}, {"radius", 1.0}}, false},
      {"womersley",
       "oscillatory pipe profile",
       {{"radius", 1.0}, {"nu", 1.0}, {"frequency", 1.0}, {"p_o", 1.0}, {"p_s", 4.0}, {"ell", 1.0}},
       false},
      {"rigid_swirl_pulsatile", "rigid swirl over uniform inflow", {{"omega", 1.0}, {"r_max", 1.0}}, true},
      {"nozzle", "steady-shape contraction", {}, true},
      {"modulated_nozzle", "contraction breathing in time", {}, true},
      {"pinch", "stream-function pinch with wall streamline", {{"eps", 0.3}}, true},
      {"vortex_nozzle", "contraction with a line vortex", {{"circulation", 0.5}}, true},
      {"swirling_strain", "axial strain with growing swirl", {{"gamma", 0.5}, {"omega0", 1.0}, {"z_min", 0.0}}, true},
      {"sheared_swirl", "swirl varying along the axis", {{"omega0", 1.0}, {"omega1", 0.5}, {"axial", 1.0}}, false},
      {"radial_expansion", "compressible radial expansion", {{"rate", 1.0}}, false},
      {"swirl_nozzle",
       "swirling contraction coupled to the inflow",
       {{"swirl", 1.0}, {"lambda0", 0.5}, {"coupling", 1e-3}, {"lead", 1e-6}},
       true},
  };
  return entries;
}

FieldPtr make_catalog_field(const std::string& name, const std::map<std::string, double>& params,
                            const InflowProfile& g) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog())
    if (e.name == name) entry = &e;
  if (!entry) throw ValidationError("unknown field '" + name + "'");
  std::map<std::string, double> p = entry->defaults;
  for (const auto& [k, v] : params) {
    if (!p.count(k)) throw ValidationError("field '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  if (name == "uniform") return uniform_field(g);
  if (name == "poiseuille") return poiseuille_field(p["p_s"], p["nu"], p["ell"], p["radius"]);
  if (name == "womersley")
    return womersley_field({p["radius"], p["nu"], p["frequency"], p["p_o"], p["p_s"], p["ell"]});
  if (name == "rigid_swirl_pulsatile") return rigid_swirl_pulsatile_field(p["omega"], g, p["r_max"]);
  if (name == "nozzle") return nozzle_field(g);
  if (name == "modulated_nozzle") return modulated_nozzle_field(g);
  if (name == "pinch") return pinch_field(g, p["eps"]);
  if (name == "vortex_nozzle") return vortex_nozzle_field(g, p["circulation"]);
  if (name == "swirling_strain") return swirling_strain_field(g, p["gamma"], p["omega0"], p["z_min"]);
  if (name == "sheared_swirl") return sheared_swirl_field(p["omega0"], p["omega1"], p["axial"]);
  if (name == "radial_expansion") return radial_expansion_field(p["rate"]);
  return swirl_nozzle_field(g, {p["swirl"], p["lambda0"], p["coupling"], p["lead"]});
}

}  // namespace axiflow
