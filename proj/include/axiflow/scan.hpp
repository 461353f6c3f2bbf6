#pragma once

#include <optional>
#include <string>
#include <vector>

#include "axiflow/identity.hpp"

namespace axiflow {

/// Flux condition on the initial inflow: 1/beta^5 <= g0 <= 1/epsilon^5 and
/// 1/delta^3 < g1/delta^2 < g2. Returns the first violated bound, or nothing.
std::optional<std::string> admissibility(const ScanParams& params, double g0, double g1, double g2);

struct ScanRow {
  std::size_t index = 0;  ///< position in the full (g0, g1, g2, seed) grid
  double g0 = 0.0, g1 = 0.0, g2 = 0.0;
  double epsilon = 0.0, beta = 0.0, delta = 0.0;
  double seed_r0 = 0.0, seed_z = 0.0;
  double seed_r = 0.0;  ///< physical radius of the seed line at z
  double u_theta = 0.0;
  double laminar_x = 0.0;
  double laminar_t = 0.0;
  double laminar_t_half = 0.0;
  double dt = 0.0;
  KeyInequalities key;

  friend bool operator==(const ScanRow&, const ScanRow&) = default;
};

struct ScanSkip {
  std::size_t index = 0;
  double g0 = 0.0, g1 = 0.0, g2 = 0.0;
  double seed_r0 = 0.0, seed_z = 0.0;
  std::string reason;

  friend bool operator==(const ScanSkip&, const ScanSkip&) = default;
};

struct ScanTable {
  std::vector<ScanRow> rows;  ///< sorted by grid index
  std::vector<ScanSkip> skipped;
  std::optional<double> tau_g1;  ///< Kendall tau-b of L^t against g1 (needs two rows)
  std::optional<double> tau_g2;
  std::string diagnostic;

  friend bool operator==(const ScanTable&, const ScanTable&) = default;
};

/// Kendall tau-b; empty when either sample is constant or shorter than two.
std::optional<double> kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

/// Runs the swirling-nozzle family g(t) = g0 + g1 t + g2 t^2 / 2 over the admissible grid,
/// evaluating L^x, L^t and the key inequalities at t = 0 for every seed.
ScanTable instability_scan(const ScanParams& params);

}  // namespace axiflow
