#pragma once

#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "axiflow/taylor.hpp"

namespace axiflow {

/// Time profile g(t) of the inflow rate driving a field.
///
/// Analytic kinds carry exact derivatives; `sampled` wraps an arbitrary callable
/// and differentiates it by central differences.
class InflowProfile {
 public:
  enum class Kind { constant, polynomial, sinusoidal, sampled };

  InflowProfile() : InflowProfile(constant(1.0)) {}

  static InflowProfile constant(double value);
  /// sum_k c[k] t^k
  static InflowProfile polynomial(std::vector<double> coefficients);
  /// g0 + g1 t + g2 t^2 / 2, so that g(0), g'(0), g''(0) are the arguments.
  static InflowProfile quadratic(double g0, double g1, double g2);
  /// mean + amplitude * sin(frequency t + phase)
  static InflowProfile sinusoidal(double mean, double amplitude, double frequency,
                                  double phase = 0.0);
  static InflowProfile sampled(std::function<double(double)> g);

  double value(double t) const { return derivatives(t)[0]; }
  double rate(double t) const { return derivatives(t)[1]; }
  double curvature(double t) const { return derivatives(t)[2]; }

  /// g, g', ..., g^(5) at t.
  DerivativeList derivatives(double t) const;

  /// Works for plain doubles and for Taylor / Series arguments.
  template <class S>
  S operator()(const S& t) const {
    if constexpr (std::is_arithmetic_v<S>) {
      return value(static_cast<double>(t));
    } else {
      return compose(t, derivatives(t.value()));
    }
  }

  /// g'(t), again for doubles and expansions alike.
  template <class S>
  S rate_of(const S& t) const {
    if constexpr (std::is_arithmetic_v<S>) {
      return rate(static_cast<double>(t));
    } else {
      const DerivativeList d = derivatives(t.value());
      return compose(t, DerivativeList{d[1], d[2], d[3], d[4], d[5], 0.0});
    }
  }

  /// True if g > 0 at `samples` equally spaced points of [t0, t1].
  bool positive_on(double t0, double t1, int samples = 1001) const;

  /// Time over which g changes appreciably: min(g/|g'|, sqrt(g/|g''|)).
  double variation_timescale(double t) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& parameters() const { return params_; }
  std::string describe() const;

 private:
  InflowProfile(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

  Kind kind_ = Kind::constant;
  std::vector<double> params_;
  std::function<double(double)> sampled_;
};

}  // namespace axiflow
