#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "axiflow/errors.hpp"
#include "axiflow/taylor.hpp"

namespace axiflow {

/// Below this radius the axis limit (parity extension) replaces direct evaluation.
inline constexpr double kAxisFloor = 1e-8;

struct Domain {
  double r_max = 1.0;
  double z_min = -std::numeric_limits<double>::infinity();
  double z_max = std::numeric_limits<double>::infinity();
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
};

/// Standard: v_r and v_theta are odd in r, v_z is even. None: no symmetry assumed.
enum class AxisParity { standard, none };

struct FieldInfo {
  std::string name;
  Domain domain{};
  AxisParity parity = AxisParity::standard;
  bool incompressible = true;
  bool no_penetration = false;  ///< v_r vanishes on r = r_max
  double default_z_in = -20.0;  ///< inlet station for streamline maps
};

/// Components of a velocity in the local cylindrical basis (e_r, e_theta, e_z).
struct CylVelocity {
  double r = 0.0;
  double theta = 0.0;
  double z = 0.0;
  double norm() const { return std::sqrt(r * r + theta * theta + z * z); }
};

/// Third-order expansions of (v_r, v_theta, v_z) in (r, z, t).
struct VelocityJet {
  Taylor<3> r, theta, z;
  CylVelocity value() const { return {r.value(), theta.value(), z.value()}; }
};

struct PressureGradient {
  double dr = 0.0;
  double dz = 0.0;
};
using PressureGradientFn = std::function<PressureGradient(double r, double z, double t)>;

/// An axisymmetric velocity field u(r, z, t).
///
/// Public entry points check the domain and apply the axis limit; concrete
/// fields only implement the raw evaluations.
class Field {
 public:
  virtual ~Field() = default;

  const FieldInfo& info() const { return info_; }
  const std::string& name() const { return info_.name; }

  bool contains(double r, double z, double t) const;
  /// Throws DomainError naming the violated bound.
  void check_domain(double r, double z, double t) const;

  CylVelocity velocity(double r, double z, double t) const;
  VelocityJet jet(double r, double z, double t) const;
  /// Expansion of the streamline slope v_r / v_z.
  Taylor<3> slope_jet(double r, double z, double t) const;

  bool has_pressure_gradient() const { return static_cast<bool>(pressure_); }
  PressureGradient pressure_gradient(double r, double z, double t) const;

 protected:
  explicit Field(FieldInfo info, PressureGradientFn pressure = {})
      : info_(std::move(info)), pressure_(std::move(pressure)) {}

  virtual CylVelocity raw_velocity(double r, double z, double t) const = 0;
  virtual VelocityJet raw_jet(double r, double z, double t) const = 0;
  /// Fields whose slope is simpler than the ratio of two jets may override.
  virtual std::optional<Taylor<3>> raw_slope_jet(double, double, double) const {
    return std::nullopt;
  }

 private:
  FieldInfo info_;
  PressureGradientFn pressure_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Field defined by one generic callable `f(r, z, t) -> std::array<S, 3>` that
/// accepts double and Taylor arguments alike.
template <class VelocityFn>
class AnalyticField final : public Field {
 public:
  AnalyticField(FieldInfo info, VelocityFn fn, PressureGradientFn pressure)
      : Field(std::move(info), std::move(pressure)), fn_(std::move(fn)) {}

 protected:
  CylVelocity raw_velocity(double r, double z, double t) const override {
    const std::array<double, 3> v = fn_(r, z, t);
    return {v[0], v[1], v[2]};
  }
  VelocityJet raw_jet(double r, double z, double t) const override {
    using T3 = Taylor<3>;
    auto v = fn_(T3::variable(Axis::r, r), T3::variable(Axis::z, z), T3::variable(Axis::t, t));
    return {T3(v[0]), T3(v[1]), T3(v[2])};
  }

 private:
  VelocityFn fn_;
};

/// Analytic field whose streamline slope is given separately.
template <class VelocityFn, class SlopeFn>
class AnalyticSlopeField final : public Field {
 public:
  AnalyticSlopeField(FieldInfo info, VelocityFn fn, SlopeFn slope, PressureGradientFn pressure)
      : Field(std::move(info), std::move(pressure)), fn_(std::move(fn)), slope_(std::move(slope)) {}

 protected:
  CylVelocity raw_velocity(double r, double z, double t) const override {
    const std::array<double, 3> v = fn_(r, z, t);
    return {v[0], v[1], v[2]};
  }
  VelocityJet raw_jet(double r, double z, double t) const override {
    using T3 = Taylor<3>;
    auto v = fn_(T3::variable(Axis::r, r), T3::variable(Axis::z, z), T3::variable(Axis::t, t));
    return {T3(v[0]), T3(v[1]), T3(v[2])};
  }
  std::optional<Taylor<3>> raw_slope_jet(double r, double z, double t) const override {
    using T3 = Taylor<3>;
    return T3(slope_(T3::variable(Axis::r, r), T3::variable(Axis::z, z), T3::variable(Axis::t, t)));
  }

 private:
  VelocityFn fn_;
  SlopeFn slope_;
};

/// Field from a Stokes stream function psi(r, z, t) and a swirl v_theta(r, z, t):
/// v_r = -psi_z / r, v_z = psi_r / r. Incompressible by construction.
template <class StreamFn, class SwirlFn>
class StreamFunctionField final : public Field {
 public:
  StreamFunctionField(FieldInfo info, StreamFn psi, SwirlFn swirl, PressureGradientFn pressure)
      : Field(std::move(info), std::move(pressure)), psi_(std::move(psi)), swirl_(std::move(swirl)) {}

 protected:
  CylVelocity raw_velocity(double r, double z, double t) const override {
    using T1 = Taylor<1>;
    const T1 p = psi_(T1::variable(Axis::r, r), T1::variable(Axis::z, z), T1(t));
    return {-p.coeff(0, 1, 0) / r, swirl_(r, z, t), p.coeff(1, 0, 0) / r};
  }
  VelocityJet raw_jet(double r, double z, double t) const override {
    using T3 = Taylor<3>;
    using T4 = Taylor<4>;
    const T4 p = psi_(T4::variable(Axis::r, r), T4::variable(Axis::z, z), T4::variable(Axis::t, t));
    const T3 rv = T3::variable(Axis::r, r);
    const T3 zv = T3::variable(Axis::z, z);
    const T3 tv = T3::variable(Axis::t, t);
    return {-p.diff(Axis::z) / rv, T3(swirl_(rv, zv, tv)), p.diff(Axis::r) / rv};
  }

 private:
  StreamFn psi_;
  SwirlFn swirl_;
};

template <class VelocityFn>
FieldPtr make_analytic_field(FieldInfo info, VelocityFn fn, PressureGradientFn pressure = {}) {
  return std::make_shared<AnalyticField<VelocityFn>>(std::move(info), std::move(fn),
                                                     std::move(pressure));
}

template <class VelocityFn, class SlopeFn>
FieldPtr make_analytic_field_with_slope(FieldInfo info, VelocityFn fn, SlopeFn slope,
                             PressureGradientFn pressure = {}) {
  return std::make_shared<AnalyticSlopeField<VelocityFn, SlopeFn>>(
      std::move(info), std::move(fn), std::move(slope), std::move(pressure));
}

template <class StreamFn, class SwirlFn>
FieldPtr make_stream_function_field(FieldInfo info, StreamFn psi, SwirlFn swirl,
                                    PressureGradientFn pressure = {}) {
  return std::make_shared<StreamFunctionField<StreamFn, SwirlFn>>(
      std::move(info), std::move(psi), std::move(swirl), std::move(pressure));
}

using SampledVelocityFn = std::function<CylVelocity(double r, double z, double t)>;

/// Field known only by point evaluations; jets come from finite differences.
FieldPtr make_sampled_field(FieldInfo info, SampledVelocityFn fn, PressureGradientFn pressure = {});

/// Finite-difference expansion of a sampled velocity (one-sided next to the axis).
VelocityJet finite_difference_jet(const SampledVelocityFn& fn, double r, double z, double t);

}  // namespace axiflow
