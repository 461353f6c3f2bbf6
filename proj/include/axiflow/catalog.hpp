#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "axiflow/field.hpp"
#include "axiflow/inflow.hpp"

namespace axiflow {

/// v = (0, 0, g(t)); exact Euler with dp/dz = -g'.
FieldPtr uniform_field(InflowProfile g);

/// Steady pipe flow v_z = p_s (R^2 - r^2) / (4 nu ell) in a pipe of radius R.
FieldPtr poiseuille_field(double p_s, double nu, double ell, double radius);

/// Rigid rotation omega about the axis plus uniform axial flow g(t); exact Euler.
FieldPtr rigid_swirl_pulsatile_field(double omega, InflowProfile g, double r_max = 1.0);

/// Contraction a(z) = 1 + (1 + tanh z)/4: v_z = g a, v_r = -g r a'/2.
/// Streamlines satisfy R^2 a(Z) = const.
FieldPtr nozzle_field(InflowProfile g);

/// Nozzle whose contraction breathes in time: a = 1 + (1 + tanh z)(1 + sin(t)/2)/8.
FieldPtr modulated_nozzle_field(InflowProfile g);

/// Stokes stream function (g/2) r^2 [1 + eps (1 - r^2) sech^2 z]; r = 1 is a streamline.
FieldPtr pinch_field(InflowProfile g, double eps);

/// Nozzle with a line vortex v_theta = c / r (singular on the axis).
FieldPtr vortex_nozzle_field(InflowProfile g, double circulation);

/// Axial strain with growing rigid swirl; exact Euler for z >= z_min.
FieldPtr swirling_strain_field(InflowProfile g, double gamma, double omega0, double z_min = 0.0);

/// Swirl omega(z) r = (omega0 + omega1 tanh z) r over uniform axial flow; not an Euler field.
FieldPtr sheared_swirl_field(double omega0, double omega1, double axial);

/// v_r = rate * r, nothing else; divergence 2 * rate.
FieldPtr radial_expansion_field(double rate);

/// Swirling nozzle whose contraction responds to the inflow:
///   a(z, t)     = 1 + lambda(t) (1 + tanh z) / 2
///   lambda(t)   = lambda0 + coupling * swirl * [(g - g(0)) + lead * (g' - g'(0))] / g(0)
///   v = (-g r d_z a / 2, swirl * r * a, g a)
/// With swirl = 0 the streamline geometry is frozen in time.
struct SwirlNozzleParams {
  double swirl = 1.0;
  double lambda0 = 0.5;
  double coupling = 1e-3;
  double lead = 1e-6;
};
FieldPtr swirl_nozzle_field(InflowProfile g, const SwirlNozzleParams& params = {});

/// Oscillatory pipe flow: Poiseuille part from p_s plus the Bessel profile driven by
/// p_o cos(N t). Satisfies d_t u - nu (u_rr + u_r / r) = p_s / ell + p_o cos(N t).
struct WomersleyParams {
  double radius = 1.0;
  double nu = 1.0;
  double frequency = 1.0;  ///< N
  double p_o = 1.0;
  double p_s = 0.0;
  double ell = 1.0;
};
double womersley_number(double radius, double frequency, double nu);
FieldPtr womersley_field(const WomersleyParams& params);
/// Linearized momentum residual of the axial profile at (r, t).
double womersley_residual(const Field& field, const WomersleyParams& params, double r, double t);

/// J0(x) and its first three derivatives, summed as a power series.
/// Intended for |x| <= 20; larger arguments raise NumericError.
std::array<std::complex<double>, 4> bessel_j0(std::complex<double> x);

/// Named constructors for the configuration layer.
struct CatalogEntry {
  std::string name;
  std::string summary;
  std::map<std::string, double> defaults;
  bool uses_inflow = false;
};
const std::vector<CatalogEntry>& catalog();
/// Unknown parameter names raise ValidationError; absent ones take defaults.
FieldPtr make_catalog_field(const std::string& name, const std::map<std::string, double>& params,
                            const InflowProfile& g);

}  // namespace axiflow
