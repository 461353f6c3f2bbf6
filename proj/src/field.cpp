#include "axiflow/field.hpp"

#include <sstream>
#include <vector>

namespace axiflow {

namespace {

// Points within this relative distance of the wall still count as inside.
constexpr double kWallSlack = 1e-9;

void scale_parity(Taylor<3>& jet, bool odd, double factor) {
  // Odd functions of r keep only odd powers of r in their value, so the
  // coefficients of even r-order are proportional to r near the axis;
  // even functions the other way round.
  Taylor<3>::for_each_monomial<3>([&](int a, int b, int c) {
    if ((a % 2 == 0) == odd) jet.coeff(a, b, c) *= factor;
  });
}

}  // namespace

bool Field::contains(double r, double z, double t) const {
  const Domain& d = info_.domain;
  return r >= 0.0 && r <= d.r_max * (1.0 + kWallSlack) && z >= d.z_min && z <= d.z_max &&
         t >= d.t_min && t <= d.t_max;
}

void Field::check_domain(double r, double z, double t) const {
  const Domain& d = info_.domain;
  std::ostringstream os;
  os << "field '" << info_.name << "': ";
  if (!(r >= 0.0)) {
    os << "r = " << r << " is negative";
  } else if (!(r <= d.r_max * (1.0 + kWallSlack))) {
    os << "r = " << r << " exceeds r_max = " << d.r_max;
  } else if (!(z >= d.z_min)) {
    os << "z = " << z << " is below z_min = " << d.z_min;
  } else if (!(z <= d.z_max)) {
    os << "z = " << z << " is above z_max = " << d.z_max;
  } else if (!(t >= d.t_min)) {
    os << "t = " << t << " is before t_min = " << d.t_min;
  } else if (!(t <= d.t_max)) {
    os << "t = " << t << " is after t_max = " << d.t_max;
  } else {
    return;
  }
  throw DomainError(os.str());
}

CylVelocity Field::velocity(double r, double z, double t) const {
  check_domain(r, z, t);
  if (r < kAxisFloor && info_.parity == AxisParity::standard) {
    CylVelocity v = raw_velocity(kAxisFloor, z, t);
    const double f = r / kAxisFloor;
    v.r *= f;
    v.theta *= f;
    return v;
  }
  return raw_velocity(r, z, t);
}

VelocityJet Field::jet(double r, double z, double t) const {
  check_domain(r, z, t);
  if (r < kAxisFloor && info_.parity == AxisParity::standard) {
    VelocityJet j = raw_jet(kAxisFloor, z, t);
    const double f = r / kAxisFloor;
    scale_parity(j.r, true, f);
    scale_parity(j.theta, true, f);
    scale_parity(j.z, false, f);
    return j;
  }
  return raw_jet(r, z, t);
}

Taylor<3> Field::slope_jet(double r, double z, double t) const {
  check_domain(r, z, t);
  const bool near_axis = r < kAxisFloor && info_.parity == AxisParity::standard;
  const double re = near_axis ? kAxisFloor : r;
  Taylor<3> s;
  if (auto custom = raw_slope_jet(re, z, t)) {
    s = *custom;
  } else {
    const VelocityJet j = raw_jet(re, z, t);
    s = j.r / j.z;
  }
  if (near_axis) scale_parity(s, true, r / kAxisFloor);
  return s;
}

PressureGradient Field::pressure_gradient(double r, double z, double t) const {
  if (!pressure_) throw NotCertified("field '" + info_.name + "' carries no pressure gradient");
  check_domain(r, z, t);
  return pressure_(r, z, t);
}

// ---------------------------------------------------------------------------

namespace {

struct Stencil {
  std::vector<double> offsets;  // in units of the step
  std::vector<double> weights;  // divide by h^order afterwards
};

Stencil central(int order) {
  switch (order) {
    case 0: return {{0}, {1}};
    case 1: return {{-1, 1}, {-0.5, 0.5}};
    case 2: return {{-1, 0, 1}, {1, -2, 1}};
    default: return {{-2, -1, 1, 2}, {-0.5, 1, -1, 0.5}};
  }
}

Stencil forward(int order) {
  switch (order) {
    case 0: return {{0}, {1}};
    case 1: return {{0, 1, 2}, {-1.5, 2, -0.5}};
    case 2: return {{0, 1, 2, 3}, {2, -5, 4, -1}};
    default: return {{0, 1, 2, 3, 4}, {-2.5, 9, -12, 7, -1.5}};
  }
}

class SampledField final : public Field {
 public:
  SampledField(FieldInfo info, SampledVelocityFn fn, PressureGradientFn pressure)
      : Field(std::move(info), std::move(pressure)), fn_(std::move(fn)) {}

 protected:
  CylVelocity raw_velocity(double r, double z, double t) const override { return fn_(r, z, t); }
  VelocityJet raw_jet(double r, double z, double t) const override {
    return finite_difference_jet(fn_, r, z, t);
  }

 private:
  SampledVelocityFn fn_;
};

}  // namespace

FieldPtr make_sampled_field(FieldInfo info, SampledVelocityFn fn, PressureGradientFn pressure) {
  if (!fn) throw ValidationError("sampled field needs a callable");
  return std::make_shared<SampledField>(std::move(info), std::move(fn), std::move(pressure));
}

VelocityJet finite_difference_jet(const SampledVelocityFn& fn, double r, double z, double t) {
  const double eps = std::numeric_limits<double>::epsilon();
  VelocityJet jet;
  jet.r = Taylor<3>(0.0);
  jet.theta = Taylor<3>(0.0);
  jet.z = Taylor<3>(0.0);
  const CylVelocity v0 = fn(r, z, t);
  jet.r.set_value(v0.r);
  jet.theta.set_value(v0.theta);
  jet.z.set_value(v0.z);

  Taylor<3>::for_each_monomial<3>([&](int a, int b, int c) {
    const int order = a + b + c;
    if (order == 0) return;
    // Step balancing truncation against rounding for a derivative of this order.
    const double base = std::pow(eps, 1.0 / (order + 2));
    const double hr = base * std::max(1.0, std::abs(r));
    const double hz = base * std::max(1.0, std::abs(z));
    const double ht = base * std::max(1.0, std::abs(t));
    const Stencil sr = (r - 2.0 * hr < 0.0) ? forward(a) : central(a);
    const Stencil sz = central(b);
    const Stencil st = central(c);
    double acc_r = 0.0, acc_theta = 0.0, acc_z = 0.0;
    for (std::size_t i = 0; i < sr.offsets.size(); ++i)
      for (std::size_t j = 0; j < sz.offsets.size(); ++j)
        for (std::size_t k = 0; k < st.offsets.size(); ++k) {
          const double w = sr.weights[i] * sz.weights[j] * st.weights[k];
          const CylVelocity v =
              fn(r + sr.offsets[i] * hr, z + sz.offsets[j] * hz, t + st.offsets[k] * ht);
          acc_r += w * v.r;
          acc_theta += w * v.theta;
          acc_z += w * v.z;
        }
    const double scale = std::pow(hr, a) * std::pow(hz, b) * std::pow(ht, c) *
                         detail::factorial(a) * detail::factorial(b) * detail::factorial(c);
    jet.r.coeff(a, b, c) = acc_r / scale;
    jet.theta.coeff(a, b, c) = acc_theta / scale;
    jet.z.coeff(a, b, c) = acc_z / scale;
  });
  return jet;
}

}  // namespace axiflow
