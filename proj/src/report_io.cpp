#include "axiflow/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace axiflow {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <std::size_t N>
Json numbers(const std::array<double, N>& a) {
  Json j = Json::array();
  for (double v : a) j.push_back(number(v));
  return j;
}

template <std::size_t N>
std::array<double, N> read_numbers(const Json& j) {
  if (!j.is_array() || j.size() != N) throw ValidationError("expected an array of " + std::to_string(N));
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = read_number(j[i]);
  return a;
}

Json vec3(const Eigen::Vector3d& v) { return Json::array({number(v[0]), number(v[1]), number(v[2])}); }

Eigen::Vector3d read_vec3(const Json& j) {
  const auto a = read_numbers<3>(j);
  return {a[0], a[1], a[2]};
}

Verdict read_verdict(const std::string& s) {
  if (s == "holds") return Verdict::holds;
  if (s == "fails") return Verdict::fails;
  if (s == "degenerate") return Verdict::degenerate;
  throw ValidationError("unknown verdict '" + s + "'");
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------

CsvTable::CsvTable(std::vector<std::string> columns, std::string note)
    : columns_(std::move(columns)), note_(std::move(note)) {}

void CsvTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size())
    throw ValidationError("CSV row has " + std::to_string(cells.size()) + " cells for " +
                          std::to_string(columns_.size()) + " columns");
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const auto& c : cells) {
    if (const double* d = std::get_if<double>(&c)) row.push_back(format_number(*d));
    else if (const long long* i = std::get_if<long long>(&c)) row.push_back(std::to_string(*i));
    else row.push_back(quote(std::get<std::string>(c)));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out = "# columns:";
  for (const auto& c : columns_) out += ' ' + c;
  out += '\n';
  if (!note_.empty()) out += "# " + note_ + '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + '\n'); }

Json make_document(const std::string& kind, const Json& config, Json result) {
  return Json{{"schema_version", kSchemaVersion}, {"kind", kind}, {"config", config}, {"result", std::move(result)}};
}

// ---------------------------------------------------------------------------

void to_json(Json& j, const IdentityCheck& c) {
  j = Json{{"name", c.name},         {"lhs", number(c.lhs)},
           {"rhs", number(c.rhs)},   {"absolute", number(c.absolute)},
           {"scale", number(c.scale)}, {"relative", number(c.relative)},
           {"steps", numbers(c.steps)}, {"residuals", numbers(c.residuals)},
           {"slope", optional_number(c.slope)}, {"pass", c.pass}};
}

void from_json(const Json& j, IdentityCheck& c) {
  c.name = j.at("name").get<std::string>();
  c.lhs = read_number(j.at("lhs"));
  c.rhs = read_number(j.at("rhs"));
  c.absolute = read_number(j.at("absolute"));
  c.scale = read_number(j.at("scale"));
  c.relative = read_number(j.at("relative"));
  c.steps = read_numbers<3>(j.at("steps"));
  c.residuals = read_numbers<3>(j.at("residuals"));
  c.slope = read_optional(j.at("slope"));
  c.pass = j.at("pass").get<bool>();
}

void to_json(Json& j, const IdentityReport& r) {
  j = Json{{"field", r.field},
           {"t", number(r.t)},
           {"s", number(r.s)},
           {"position", vec3(r.position)},
           {"kappa", number(r.kappa)},
           {"torsion", number(r.torsion)},
           {"dkappa_ds", number(r.dkappa_ds)},
           {"speed", number(r.speed)},
           {"speed_rate", number(r.speed_rate)},
           {"time_step", number(r.time_step)},
           {"space_step", number(r.space_step)},
           {"tolerance", number(r.tolerance)},
           {"identities", r.identities},
           {"frozen", r.frozen},
           {"pass", r.pass}};
}

void from_json(const Json& j, IdentityReport& r) {
  r.field = j.at("field").get<std::string>();
  r.t = read_number(j.at("t"));
  r.s = read_number(j.at("s"));
  r.position = read_vec3(j.at("position"));
  r.kappa = read_number(j.at("kappa"));
  r.torsion = read_number(j.at("torsion"));
  r.dkappa_ds = read_number(j.at("dkappa_ds"));
  r.speed = read_number(j.at("speed"));
  r.speed_rate = read_number(j.at("speed_rate"));
  r.time_step = read_number(j.at("time_step"));
  r.space_step = read_number(j.at("space_step"));
  r.tolerance = read_number(j.at("tolerance"));
  r.identities = j.at("identities").get<std::array<IdentityCheck, 4>>();
  r.frozen = j.at("frozen").get<std::array<IdentityCheck, 2>>();
  r.pass = j.at("pass").get<bool>();
}

void to_json(Json& j, const KeyInequalities& k) {
  j = Json{{"verdict", to_string(k.verdict)},
           {"detail", k.detail},
           {"speed", number(k.speed)},
           {"speed_rate", number(k.speed_rate)},
           {"kappa", number(k.kappa)},
           {"torsion", number(k.torsion)},
           {"dkappa_ds", number(k.dkappa_ds)},
           {"n_e_theta", number(k.n_e_theta)},
           {"b_e_theta", number(k.b_e_theta)},
           {"u_theta", number(k.u_theta)},
           {"swirl_in_band", k.swirl_in_band},
           {"margins", numbers(k.margins)},
           {"lower_margin", number(k.lower_margin)}};
}

void from_json(const Json& j, KeyInequalities& k) {
  k.verdict = read_verdict(j.at("verdict").get<std::string>());
  k.detail = j.at("detail").get<std::string>();
  k.speed = read_number(j.at("speed"));
  k.speed_rate = read_number(j.at("speed_rate"));
  k.kappa = read_number(j.at("kappa"));
  k.torsion = read_number(j.at("torsion"));
  k.dkappa_ds = read_number(j.at("dkappa_ds"));
  k.n_e_theta = read_number(j.at("n_e_theta"));
  k.b_e_theta = read_number(j.at("b_e_theta"));
  k.u_theta = read_number(j.at("u_theta"));
  k.swirl_in_band = j.at("swirl_in_band").get<bool>();
  k.margins = read_numbers<3>(j.at("margins"));
  k.lower_margin = read_number(j.at("lower_margin"));
}

void to_json(Json& j, const ScanRow& r) {
  j = Json{{"index", r.index},
           {"g0", number(r.g0)},
           {"g1", number(r.g1)},
           {"g2", number(r.g2)},
           {"epsilon", number(r.epsilon)},
           {"beta", number(r.beta)},
           {"delta", number(r.delta)},
           {"seed_r0", number(r.seed_r0)},
           {"seed_z", number(r.seed_z)},
           {"seed_r", number(r.seed_r)},
           {"u_theta", number(r.u_theta)},
           {"laminar_x", number(r.laminar_x)},
           {"laminar_t", number(r.laminar_t)},
           {"laminar_t_half", number(r.laminar_t_half)},
           {"dt", number(r.dt)},
           {"key", r.key}};
}

void from_json(const Json& j, ScanRow& r) {
  r.index = j.at("index").get<std::size_t>();
  r.g0 = read_number(j.at("g0"));
  r.g1 = read_number(j.at("g1"));
  r.g2 = read_number(j.at("g2"));
  r.epsilon = read_number(j.at("epsilon"));
  r.beta = read_number(j.at("beta"));
  r.delta = read_number(j.at("delta"));
  r.seed_r0 = read_number(j.at("seed_r0"));
  r.seed_z = read_number(j.at("seed_z"));
  r.seed_r = read_number(j.at("seed_r"));
  r.u_theta = read_number(j.at("u_theta"));
  r.laminar_x = read_number(j.at("laminar_x"));
  r.laminar_t = read_number(j.at("laminar_t"));
  r.laminar_t_half = read_number(j.at("laminar_t_half"));
  r.dt = read_number(j.at("dt"));
  r.key = j.at("key").get<KeyInequalities>();
}

void to_json(Json& j, const ScanSkip& s) {
  j = Json{{"index", s.index},          {"g0", number(s.g0)},         {"g1", number(s.g1)},
           {"g2", number(s.g2)},        {"seed_r0", number(s.seed_r0)}, {"seed_z", number(s.seed_z)},
           {"reason", s.reason}};
}

void from_json(const Json& j, ScanSkip& s) {
  s.index = j.at("index").get<std::size_t>();
  s.g0 = read_number(j.at("g0"));
  s.g1 = read_number(j.at("g1"));
  s.g2 = read_number(j.at("g2"));
  s.seed_r0 = read_number(j.at("seed_r0"));
  s.seed_z = read_number(j.at("seed_z"));
  s.reason = j.at("reason").get<std::string>();
}

void to_json(Json& j, const ScanTable& t) {
  j = Json{{"rows", t.rows},
           {"skipped", t.skipped},
           {"kendall_tau_g1", optional_number(t.tau_g1)},
           {"kendall_tau_g2", optional_number(t.tau_g2)},
           {"diagnostic", t.diagnostic}};
}

void from_json(const Json& j, ScanTable& t) {
  t.rows = j.at("rows").get<std::vector<ScanRow>>();
  t.skipped = j.at("skipped").get<std::vector<ScanSkip>>();
  t.tau_g1 = read_optional(j.at("kendall_tau_g1"));
  t.tau_g2 = read_optional(j.at("kendall_tau_g2"));
  t.diagnostic = j.at("diagnostic").get<std::string>();
}

void to_json(Json& j, const Certification& c) {
  j = Json{{"exact", c.exact},
           {"max_swirl_acceleration", number(c.max_swirl_acceleration)},
           {"max_curl", number(c.max_curl)},
           {"max_acceleration", number(c.max_acceleration)},
           {"tolerance", number(c.tolerance)},
           {"detail", c.detail}};
}

void to_json(Json& j, const RotationBalance& b) {
  j = Json{{"applicable", b.applicable},
           {"degenerate", b.degenerate},
           {"detail", b.detail},
           {"certification", b.certification},
           {"e_theta_n", number(b.e_theta_n)},
           {"e_theta_b", number(b.e_theta_b)},
           {"rate_term", number(b.rate_term)},
           {"curvature_term", number(b.curvature_term)},
           {"torsion_term", number(b.torsion_term)},
           {"balance", number(b.balance)},
           {"balance_alternative", number(b.balance_alternative)},
           {"lower_bound", number(b.lower_bound)},
           {"angular_derivative", number(b.angular_derivative)},
           {"angle_step", number(b.angle_step)},
           {"scale", number(b.scale)},
           {"normalized", number(b.normalized)},
           {"normalized_alternative", number(b.normalized_alternative)},
           {"agreement", number(b.agreement)}};
}

void to_json(Json& j, const FrenetSample& f) {
  j = Json{{"s", number(f.s)},
           {"t", number(f.t)},
           {"position", vec3(f.position)},
           {"tau", vec3(f.tau)},
           {"n", vec3(f.n)},
           {"b", vec3(f.b)},
           {"kappa", number(f.kappa)},
           {"torsion", number(f.torsion)},
           {"raw_torsion", number(f.raw_torsion)},
           {"dkappa_ds", number(f.dkappa_ds)},
           {"speed", number(f.speed)},
           {"orientation", to_string(f.orientation)}};
}

// ---------------------------------------------------------------------------

CsvTable trajectory_csv(const Trajectory& traj, int samples) {
  if (samples < 2) throw ValidationError("trajectory output needs at least two samples");
  CsvTable csv({"t", "s", "R", "Theta", "Z", "v_r", "v_theta", "v_z"},
               "particle path of field " + traj.field().name() + ", status " + to_string(traj.status()));
  const double a = traj.t_min(), b = traj.t_max();
  for (int i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? b : a + (b - a) * i / (samples - 1);
    const TrajectoryPoint p = traj.at(t);
    csv.add_row({p.t, p.s, p.R, p.theta, p.Z, p.v.r, p.v.theta, p.v.z});
  }
  return csv;
}

CsvTable frames_csv(const std::vector<FrenetSample>& frames) {
  CsvTable csv({"s", "tau_x", "tau_y", "tau_z", "n_x", "n_y", "n_z", "b_x", "b_y", "b_z", "kappa",
                "torsion", "orientation"},
               "torsion is reported for the recorded orientation b = orientation * (tau x n)");
  for (const auto& f : frames)
    csv.add_row({f.s, f.tau[0], f.tau[1], f.tau[2], f.n[0], f.n[1], f.n[2], f.b[0], f.b[1], f.b[2], f.kappa,
                 f.torsion, static_cast<long long>(f.orientation)});
  return csv;
}

CsvTable identities_csv(const std::vector<IdentityReport>& reports) {
  CsvTable csv({"probe_s", "probe_t", "residual_tau", "residual_n", "residual_rbar", "residual_zbar",
                "slope_tau", "slope_n", "slope_rbar", "slope_zbar", "residual_frozen_n", "residual_frozen_b",
                "pass"},
               "relative residuals at the base step; slopes are observed orders (nan: exact difference)");
  auto slope = [](const IdentityCheck& c) { return c.slope.value_or(std::numeric_limits<double>::quiet_NaN()); };
  for (const auto& r : reports) {
    const auto& id = r.identities;
    csv.add_row({r.s, r.t, id[0].relative, id[1].relative, id[2].relative, id[3].relative, slope(id[0]),
                 slope(id[1]), slope(id[2]), slope(id[3]), r.frozen[0].relative, r.frozen[1].relative,
                 static_cast<long long>(r.pass)});
  }
  return csv;
}

CsvTable scan_csv(const ScanTable& table) {
  CsvTable csv({"index", "g0", "g1", "g2", "epsilon", "beta", "delta", "seed_r0", "seed_z", "seed_r",
                "u_theta", "L_x", "L_t", "L_t_half", "dt", "margin_1", "margin_2", "margin_3", "verdict"},
               "admissible grid points only; skipped points are listed in the JSON report");
  for (const auto& r : table.rows)
    csv.add_row({static_cast<long long>(r.index), r.g0, r.g1, r.g2, r.epsilon, r.beta, r.delta, r.seed_r0,
                 r.seed_z, r.seed_r, r.u_theta, r.laminar_x, r.laminar_t, r.laminar_t_half, r.dt,
                 r.key.margins[0], r.key.margins[1], r.key.margins[2], std::string(to_string(r.key.verdict))});
  return csv;
}

CsvTable map_csv(const StreamlineMap& map) {
  CsvTable csv({"r0", "z", "R", "dR_dr0", "d2R_dr02", "d3R_dr03", "dR_dz", "d2R_dz2", "d3R_dz3", "theta"},
               "streamline map at t = " + format_number(map.t()));
  for (double r0 : map.r0_grid())
    for (double z : map.z_grid()) {
      const MapPartials p = map.partials(r0, z);
      csv.add_row({r0, z, p.d_r0[0], p.d_r0[1], p.d_r0[2], p.d_r0[3], p.d_z[1], p.d_z[2], p.d_z[3], p.theta});
    }
  return csv;
}

CsvTable rates_csv(const std::vector<RateProbe>& probes) {
  std::vector<std::string> cols{"r0", "z", "L_x", "L_t"};
  for (const char* n : LaminarRateX::names()) cols.emplace_back(n);
  for (const char* n : {"dt_inverse", "dt_dR_dr0", "dt_dR_dz", "L_t_half", "dt"}) cols.emplace_back(n);
  CsvTable csv(cols, "laminar rates with their terms");
  for (const auto& p : probes) {
    std::vector<CsvTable::Cell> row{p.r0, p.z, p.x.value, p.t.value};
    for (double v : p.x.terms) row.emplace_back(v);
    for (double v : p.t.terms) row.emplace_back(v);
    row.emplace_back(p.t.value_half_step);
    row.emplace_back(p.t.dt);
    csv.add_row(std::move(row));
  }
  return csv;
}

}  // namespace axiflow
