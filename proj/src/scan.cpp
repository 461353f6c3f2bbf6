#include "axiflow/scan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axiflow/atlas.hpp"
#include "axiflow/catalog.hpp"
#include "parallel.hpp"

namespace axiflow {

namespace {

struct Task {
  std::size_t index;
  double g0, g1, g2;
  ScanParams::SeedPoint seed;
};

void validate(const ScanParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be positive");
  };
  positive(p.epsilon, "epsilon");
  positive(p.beta, "beta");
  positive(p.delta, "delta");
  if (p.dt < 0.0) throw ValidationError("dt must be non-negative");
  if (!(p.swirl_lo <= p.swirl_hi)) throw ValidationError("swirl band is empty");
  if (p.seeds.empty()) throw ValidationError("scan needs at least one seed");
  for (const auto& s : p.seeds)
    if (!(s.r0 > 0.0)) throw ValidationError("seed inlet radius must be positive");
}

ScanRow evaluate(const ScanParams& p, const Task& task) {
  const InflowProfile g = InflowProfile::quadratic(task.g0, task.g1, task.g2);
  const SwirlNozzleParams family{p.swirl, p.lambda0, p.coupling, p.lead};
  const FieldPtr field = swirl_nozzle_field(g, family);

  ScanRow row;
  row.index = task.index;
  row.g0 = task.g0;
  row.g1 = task.g1;
  row.g2 = task.g2;
  row.epsilon = p.epsilon;
  row.beta = p.beta;
  row.delta = p.delta;
  row.seed_r0 = task.seed.r0;
  row.seed_z = task.seed.z;

  AtlasOptions opts;
  const double z_in = field->info().default_z_in;
  row.seed_r = trace_streamline(*field, 0.0, task.seed.r0, z_in, task.seed.z, opts).dense.state(task.seed.z)[0];
  row.u_theta = field->velocity(row.seed_r, task.seed.z, 0.0).theta;
  if (!(row.seed_r > 1.0 / p.beta)) {
    std::ostringstream os;
    os << "seed radius " << row.seed_r << " is not beyond 1/beta = " << 1.0 / p.beta;
    throw ValidationError(os.str());
  }
  if (p.swirl != 0.0 && (row.u_theta < p.swirl_lo || row.u_theta > p.swirl_hi)) {
    std::ostringstream os;
    os << "seed swirl " << row.u_theta << " outside [" << p.swirl_lo << ", " << p.swirl_hi << "]";
    throw ValidationError(os.str());
  }

  const double r_max = field->info().domain.r_max;
  const double spread = 0.05 * r_max;
  std::vector<double> grid{task.seed.r0};
  if (task.seed.r0 - spread >= 0.0) grid.insert(grid.begin(), task.seed.r0 - spread);
  if (task.seed.r0 + spread <= r_max) grid.push_back(task.seed.r0 + spread);
  const StreamlineMap map = build_streamline_map(field, 0.0, grid, {task.seed.z}, opts);
  row.laminar_x = laminar_rate_x(map, task.seed.r0, task.seed.z).value;

  row.dt = p.dt > 0.0 ? p.dt : default_rate_step(g, 0.0);
  const LaminarRateT lt = laminar_rate_t(field, 0.0, row.dt, task.seed.r0, task.seed.z, opts);
  row.laminar_t = lt.value;
  row.laminar_t_half = lt.value_half_step;

  const Trajectory traj = integrate_trajectory(field, Seed{row.seed_r, 0.0, task.seed.z}, 0.0, row.dt);
  row.key = key_inequalities(field, traj, 0.0, p);
  return row;
}

}  // namespace

std::optional<std::string> admissibility(const ScanParams& p, double g0, double g1, double g2) {
  std::ostringstream os;
  const double lo = std::pow(p.beta, -5.0), hi = std::pow(p.epsilon, -5.0);
  const double d3 = std::pow(p.delta, -3.0), ratio = g1 / (p.delta * p.delta);
  if (!(g0 >= lo)) {
    os << "g(0) = " << g0 << " below 1/beta^5 = " << lo;
  } else if (!(g0 <= hi)) {
    os << "g(0) = " << g0 << " above 1/epsilon^5 = " << hi;
  } else if (!(d3 < ratio)) {
    os << "g'(0)/delta^2 = " << ratio << " not above 1/delta^3 = " << d3;
  } else if (!(ratio < g2)) {
    os << "g''(0) = " << g2 << " not above g'(0)/delta^2 = " << ratio;
  } else {
    return std::nullopt;
  }
  return os.str();
}

std::optional<double> kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("rank correlation needs samples of equal length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[j] - x[i], dy = y[j] - y[i];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ties_x += 1.0;
      } else if (dy == 0.0) {
        ties_y += 1.0;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        concordant += 1.0;
      } else {
        discordant += 1.0;
      }
    }
  const double denom = std::sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y));
  if (denom == 0.0) return std::nullopt;
  return (concordant - discordant) / denom;
}

ScanTable instability_scan(const ScanParams& p) {
  validate(p);
  ScanTable table;
  std::vector<Task> tasks;
  std::size_t index = 0;
  for (double g0 : p.g0)
    for (double g1 : p.g1)
      for (double g2 : p.g2)
        for (const auto& seed : p.seeds) {
          if (auto why = admissibility(p, g0, g1, g2))
            table.skipped.push_back({index, g0, g1, g2, seed.r0, seed.z, *why});
          else
            tasks.push_back({index, g0, g1, g2, seed});
          ++index;
        }

  std::vector<std::optional<ScanRow>> rows(tasks.size());
  std::vector<std::string> failures(tasks.size());
  detail::parallel_for(tasks.size(), p.threads, [&](std::size_t i) {
    try {
      rows[i] = evaluate(p, tasks[i]);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i]) {
      table.rows.push_back(*rows[i]);
    } else {
      const Task& t = tasks[i];
      table.skipped.push_back({t.index, t.g0, t.g1, t.g2, t.seed.r0, t.seed.z, failures[i]});
    }
  }
  std::sort(table.skipped.begin(), table.skipped.end(),
            [](const ScanSkip& a, const ScanSkip& b) { return a.index < b.index; });

  if (table.rows.empty()) {
    std::ostringstream os;
    os << "no admissible grid point among " << index;
    if (std::pow(p.beta, -5.0) > std::pow(p.epsilon, -5.0)) os << "; 1/beta^5 exceeds 1/epsilon^5";
    if (!table.skipped.empty()) os << "; first reason: " << table.skipped.front().reason;
    table.diagnostic = os.str();
    return table;
  }
  std::vector<double> lt, g1, g2;
  for (const auto& r : table.rows) {
    lt.push_back(r.laminar_t);
    g1.push_back(r.g1);
    g2.push_back(r.g2);
  }
  table.tau_g1 = kendall_tau_b(g1, lt);
  table.tau_g2 = kendall_tau_b(g2, lt);
  return table;
}

}  // namespace axiflow
