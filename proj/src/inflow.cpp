#include "axiflow/inflow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "axiflow/errors.hpp"

namespace axiflow {

InflowProfile InflowProfile::constant(double value) { return {Kind::constant, {value}}; }

InflowProfile InflowProfile::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ValidationError("polynomial inflow needs at least one coefficient");
  return {Kind::polynomial, std::move(coefficients)};
}

InflowProfile InflowProfile::quadratic(double g0, double g1, double g2) {
  return polynomial({g0, g1, 0.5 * g2});
}

InflowProfile InflowProfile::sinusoidal(double mean, double amplitude, double frequency,
                                        double phase) {
  return {Kind::sinusoidal, {mean, amplitude, frequency, phase}};
}

InflowProfile InflowProfile::sampled(std::function<double(double)> g) {
  if (!g) throw ValidationError("sampled inflow needs a callable");
  InflowProfile p(Kind::sampled, {});
  p.sampled_ = std::move(g);
  return p;
}

DerivativeList InflowProfile::derivatives(double t) const {
  DerivativeList d{};
  switch (kind_) {
    case Kind::constant:
      d[0] = params_[0];
      break;
    case Kind::polynomial: {
      // Horner on each derivative of the polynomial.
      std::vector<double> c = params_;
      for (int k = 0; k < 6 && !c.empty(); ++k) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        d[k] = v;
        std::vector<double> dc;
        for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(i * c[i]);
        c = std::move(dc);
      }
      break;
    }
    case Kind::sinusoidal: {
      const double mean = params_[0], amp = params_[1], w = params_[2], ph = params_[3];
      const DerivativeList s = detail::sin_derivs(w * t + ph);
      double wk = 1.0;
      for (int k = 0; k < 6; ++k) {
        d[k] = amp * wk * s[k];
        wk *= w;
      }
      d[0] += mean;
      break;
    }
    case Kind::sampled: {
      // Central differences with steps balanced for double rounding at each order.
      const double eps = std::numeric_limits<double>::epsilon();
      const double scale = std::max(1.0, std::abs(t));
      const auto& g = sampled_;
      d[0] = g(t);
      double h = std::cbrt(eps) * scale;
      d[1] = (g(t + h) - g(t - h)) / (2 * h);
      h = std::pow(eps, 0.25) * scale;
      d[2] = (g(t + h) - 2 * d[0] + g(t - h)) / (h * h);
      h = std::pow(eps, 0.2) * scale;
      d[3] = (g(t + 2 * h) - 2 * g(t + h) + 2 * g(t - h) - g(t - 2 * h)) / (2 * h * h * h);
      h = std::pow(eps, 1.0 / 6.0) * scale;
      d[4] = (g(t + 2 * h) - 4 * g(t + h) + 6 * d[0] - 4 * g(t - h) + g(t - 2 * h)) /
             (h * h * h * h);
      break;
    }
  }
  return d;
}

bool InflowProfile::positive_on(double t0, double t1, int samples) const {
  if (samples < 2) samples = 2;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    if (!(value(t) > 0.0)) return false;
  }
  return true;
}

double InflowProfile::variation_timescale(double t) const {
  const DerivativeList d = derivatives(t);
  const double g = std::abs(d[0]);
  double tau = std::numeric_limits<double>::infinity();
  if (d[1] != 0.0) tau = std::min(tau, g / std::abs(d[1]));
  if (d[2] != 0.0) tau = std::min(tau, std::sqrt(g / std::abs(d[2])));
  return tau;
}

std::string InflowProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "constant"; break;
    case Kind::polynomial: os << "polynomial"; break;
    case Kind::sinusoidal: os << "sinusoidal"; break;
    case Kind::sampled: os << "sampled"; break;
  }
  if (!params_.empty()) {
    os << '(';
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? ", " : "") << params_[i];
    os << ')';
  }
  return os.str();
}

}  // namespace axiflow
