#include "axiflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "axiflow/atlas.hpp"
#include "axiflow/catalog.hpp"
#include "axiflow/field_ops.hpp"
#include "axiflow/frenet.hpp"
#include "axiflow/scan.hpp"

namespace axiflow {

namespace {

// ---------------------------------------------------------------------------
// Parsing helpers

void expect_object(const Json& j, const std::string& ctx, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(ctx + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ValidationError("unknown key '" + k + "' in " + ctx);
}

double get_number(const Json& j, const std::string& key, const std::string& ctx) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(ctx + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(ctx + "." + key + " must be finite");
  return d;
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& ctx) {
  return j.contains(key) ? get_number(j, key, ctx) : fallback;
}

double required(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ValidationError(ctx + " is missing '" + key + "'");
  return get_number(j, key, ctx);
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw ValidationError(what + " must be positive");
  return v;
}

int count_or(const Json& j, const std::string& key, int fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 2 || v.get<long long>() > 1000000)
    throw ValidationError(ctx + "." + key + " must be an integer in [2, 1000000]");
  return static_cast<int>(v.get<long long>());
}

std::vector<double> number_list(const Json& j, const std::string& key, const std::string& ctx) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const Json& v = j.at(key);
  if (!v.is_array()) throw ValidationError(ctx + "." + key + " must be an array of numbers");
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(ctx + "." + key + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Seed parse_seed(const Json& j, const std::string& ctx) {
  expect_object(j, ctx, {"r", "theta", "z"});
  return {required(j, "r", ctx), number_or(j, "theta", 0.0, ctx), required(j, "z", ctx)};
}

ScanParams::SeedPoint parse_station(const Json& j, const std::string& ctx) {
  expect_object(j, ctx, {"r0", "z"});
  return {required(j, "r0", ctx), required(j, "z", ctx)};
}

InflowProfile parse_inflow(const Json& j) {
  const std::string ctx = "field.inflow";
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError(ctx + " needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    expect_object(j, ctx, {"kind", "value"});
    return InflowProfile::constant(required(j, "value", ctx));
  }
  if (kind == "polynomial") {
    expect_object(j, ctx, {"kind", "coefficients"});
    auto c = number_list(j, "coefficients", ctx);
    if (c.empty()) throw ValidationError(ctx + ".coefficients must not be empty");
    return InflowProfile::polynomial(std::move(c));
  }
  if (kind == "quadratic") {
    expect_object(j, ctx, {"kind", "g0", "g1", "g2"});
    return InflowProfile::quadratic(required(j, "g0", ctx), required(j, "g1", ctx), required(j, "g2", ctx));
  }
  if (kind == "sinusoidal") {
    expect_object(j, ctx, {"kind", "mean", "amplitude", "frequency", "phase"});
    return InflowProfile::sinusoidal(required(j, "mean", ctx), required(j, "amplitude", ctx),
                                     required(j, "frequency", ctx), number_or(j, "phase", 0.0, ctx));
  }
  throw ValidationError("unknown inflow kind '" + kind + "' (constant, polynomial, quadratic, sinusoidal)");
}

FieldSpec parse_field(const Json& j) {
  expect_object(j, "field", {"name", "params", "inflow"});
  if (!j.contains("name") || !j.at("name").is_string()) throw ValidationError("field needs a string 'name'");
  FieldSpec f;
  f.name = j.at("name").get<std::string>();
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog())
    if (e.name == f.name) entry = &e;
  if (!entry) throw ValidationError("unknown field '" + f.name + "'");
  const Json params = j.value("params", Json::object());
  if (!params.is_object()) throw ValidationError("field.params must be an object");
  for (const auto& [k, v] : params.items()) {
    if (!entry->defaults.count(k)) throw ValidationError("field '" + f.name + "' has no parameter '" + k + "'");
    if (!v.is_number()) throw ValidationError("field.params." + k + " must be a number");
    f.params[k] = v.get<double>();
  }
  std::string missing;
  for (const auto& [k, v] : entry->defaults)
    if (!f.params.count(k)) missing += (missing.empty() ? "" : ", ") + k;
  if (!missing.empty()) throw ValidationError("field '" + f.name + "' is missing parameters: " + missing);
  if (j.contains("inflow")) {
    if (!entry->uses_inflow) throw ValidationError("field '" + f.name + "' takes no inflow");
    f.inflow = parse_inflow(j.at("inflow"));
  } else if (entry->uses_inflow) {
    throw ValidationError("field '" + f.name + "' needs an inflow");
  }
  return f;
}

TraceSpec parse_trace(const Json& j) {
  const std::string ctx = "trace";
  expect_object(j, ctx, {"seeds", "t0", "t1", "samples"});
  TraceSpec s;
  if (!j.contains("seeds") || !j.at("seeds").is_array() || j.at("seeds").empty())
    throw ValidationError("trace.seeds must be a non-empty array");
  for (const auto& e : j.at("seeds")) s.seeds.push_back(parse_seed(e, "trace.seeds[]"));
  s.t0 = number_or(j, "t0", 0.0, ctx);
  s.t1 = required(j, "t1", ctx);
  s.samples = count_or(j, "samples", 101, ctx);
  return s;
}

AtlasSpec parse_atlas(const Json& j) {
  const std::string ctx = "atlas";
  expect_object(j, ctx, {"t", "r0", "z", "probes", "dt", "z_in"});
  AtlasSpec a;
  a.t = number_or(j, "t", 0.0, ctx);
  a.r0 = number_list(j, "r0", ctx);
  a.z = number_list(j, "z", ctx);
  if (a.r0.size() < 2) throw ValidationError("atlas.r0 needs at least two inlet radii");
  if (a.z.empty()) throw ValidationError("atlas.z needs at least one station");
  if (j.contains("probes")) {
    if (!j.at("probes").is_array()) throw ValidationError("atlas.probes must be an array");
    for (const auto& e : j.at("probes")) a.probes.push_back(parse_station(e, "atlas.probes[]"));
  }
  a.dt = number_or(j, "dt", 0.0, ctx);
  if (a.dt < 0.0) throw ValidationError("atlas.dt must be non-negative");
  if (j.contains("z_in")) a.z_in = get_number(j, "z_in", ctx);
  return a;
}

FramesSpec parse_frames(const Json& j) {
  const std::string ctx = "frames";
  expect_object(j, ctx, {"seed", "t0", "t1", "samples", "axis_z", "points"});
  FramesSpec f;
  if (!j.contains("seed")) throw ValidationError("frames is missing 'seed'");
  f.seed = parse_seed(j.at("seed"), "frames.seed");
  f.t0 = number_or(j, "t0", 0.0, ctx);
  f.t1 = required(j, "t1", ctx);
  f.samples = count_or(j, "samples", 101, ctx);
  f.axis_z = number_list(j, "axis_z", ctx);
  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw ValidationError("frames.points must be an array");
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
        throw ValidationError("frames.points entries must be [x, y, z]");
      f.points.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
  }
  return f;
}

IdentitiesSpec parse_identities(const Json& j) {
  const std::string ctx = "identities";
  expect_object(j, ctx, {"seed", "t0", "t1", "probes", "time_step", "space_step", "tolerance"});
  IdentitiesSpec s;
  if (!j.contains("seed")) throw ValidationError("identities is missing 'seed'");
  s.seed = parse_seed(j.at("seed"), "identities.seed");
  s.t0 = number_or(j, "t0", 0.0, ctx);
  s.t1 = required(j, "t1", ctx);
  s.probes = number_list(j, "probes", ctx);
  if (s.probes.empty()) throw ValidationError("identities.probes needs at least one probe time");
  s.steps.time = number_or(j, "time_step", 0.0, ctx);
  s.steps.space = number_or(j, "space_step", 0.0, ctx);
  if (s.steps.time < 0.0 || s.steps.space < 0.0) throw ValidationError("identity steps must be non-negative");
  s.steps.tolerance = positive(number_or(j, "tolerance", 1e-4, ctx), "identities.tolerance");
  return s;
}

ScanParams parse_scan(const Json& j) {
  const std::string ctx = "scan";
  expect_object(j, ctx, {"epsilon", "beta", "delta", "g0", "g1", "g2", "seeds", "swirl", "swirl_band", "lambda0",
                         "coupling", "lead", "dt"});
  ScanParams p;
  p.epsilon = positive(number_or(j, "epsilon", p.epsilon, ctx), "scan.epsilon");
  p.beta = positive(number_or(j, "beta", p.beta, ctx), "scan.beta");
  p.delta = positive(number_or(j, "delta", p.delta, ctx), "scan.delta");
  if (j.contains("g0")) p.g0 = number_list(j, "g0", ctx);
  if (j.contains("g1")) p.g1 = number_list(j, "g1", ctx);
  if (j.contains("g2")) p.g2 = number_list(j, "g2", ctx);
  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array() || j.at("seeds").empty()) throw ValidationError("scan.seeds must be a non-empty array");
    p.seeds.clear();
    for (const auto& e : j.at("seeds")) p.seeds.push_back(parse_station(e, "scan.seeds[]"));
  }
  p.swirl = number_or(j, "swirl", p.swirl, ctx);
  if (j.contains("swirl_band")) {
    const auto band = number_list(j, "swirl_band", ctx);
    if (band.size() != 2 || !(band[0] <= band[1])) throw ValidationError("scan.swirl_band must be [lo, hi]");
    p.swirl_lo = band[0];
    p.swirl_hi = band[1];
  }
  p.lambda0 = number_or(j, "lambda0", p.lambda0, ctx);
  p.coupling = number_or(j, "coupling", p.coupling, ctx);
  p.lead = number_or(j, "lead", p.lead, ctx);
  p.dt = number_or(j, "dt", 0.0, ctx);
  if (p.dt < 0.0) throw ValidationError("scan.dt must be non-negative");
  return p;
}

// ---------------------------------------------------------------------------
// Running

struct Context {
  const ScenarioConfig& config;
  const RunSettings& settings;
  std::string probe;  ///< what was being computed when a failure occurred

  void log(const std::string& msg) const {
    if (settings.verbose && settings.log) *settings.log << msg << '\n';
  }
  std::filesystem::path out(const std::string& name) const { return settings.out_dir / name; }
  const FieldSpec& field() const {
    if (!config.field) throw ValidationError("this subcommand needs a 'field' block");
    return *config.field;
  }
  template <class T>
  const T& block(const std::optional<T>& b, const char* name) const {
    if (!b) throw ValidationError(std::string("this subcommand needs a '") + name + "' block");
    return *b;
  }
  void write(const std::string& kind, Json result) const {
    write_json(out(kind + ".json"), make_document(kind, config.source, std::move(result)));
  }
};

Json describe_inflow(const FieldSpec& f) { return f.inflow ? Json(f.inflow->describe()) : Json(nullptr); }

void run_fields(Context& ctx) {
  CsvTable csv({"name", "uses_inflow", "parameters", "summary"}, "catalog fields with default parameters");
  Json list = Json::array();
  for (const auto& e : catalog()) {
    std::string params;
    Json defaults = Json::object();
    for (const auto& [k, v] : e.defaults) {
      params += (params.empty() ? "" : " ") + k + "=" + format_number(v);
      defaults[k] = v;
    }
    csv.add_row({e.name, static_cast<long long>(e.uses_inflow), params, e.summary});
    list.push_back({{"name", e.name}, {"summary", e.summary}, {"uses_inflow", e.uses_inflow}, {"defaults", defaults}});
  }
  Json result{{"catalog", list}};
  if (ctx.config.field) {
    const FieldSpec& spec = *ctx.config.field;
    ctx.probe = "certification of " + spec.name;
    const FieldPtr field = spec.build();
    const SampleGrid grid = SampleGrid::spanning(*field, 5);
    Json cert;
    to_json(cert, certify_euler(*field, grid));
    double max_div = 0.0;
    for (double r : grid.r)
      for (double z : grid.z)
        for (double t : grid.t) max_div = std::max(max_div, std::abs(divergence(*field, r, z, t)));
    result["field"] = {{"name", spec.name},
                       {"inflow", describe_inflow(spec)},
                       {"certification", cert},
                       {"max_divergence", max_div},
                       {"incompressible", field->info().incompressible},
                       {"has_pressure_gradient", field->has_pressure_gradient()}};
  }
  write_text(ctx.out("fields.csv"), csv.str());
  ctx.write("fields", std::move(result));
}

void run_trace(Context& ctx) {
  const TraceSpec& spec = ctx.block(ctx.config.trace, "trace");
  const FieldPtr field = ctx.field().build();
  Json paths = Json::array();
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    const Seed& s = spec.seeds[i];
    ctx.probe = "trace seed " + std::to_string(i);
    const Trajectory traj = integrate_trajectory(field, s, spec.t0, spec.t1, ctx.config.trajectory);
    const std::string name = "trajectory_" + std::to_string(i) + ".csv";
    write_text(ctx.out(name), trajectory_csv(traj, spec.samples).str());
    const double t_end = spec.t1 >= spec.t0 ? traj.t_max() : traj.t_min();
    const TrajectoryPoint end = traj.at(t_end);
    paths.push_back({{"seed", {{"r", s.r}, {"theta", s.theta}, {"z", s.z}}},
                     {"file", name},
                     {"status", to_string(traj.status())},
                     {"detail", traj.status_detail()},
                     {"t_end", end.t},
                     {"end", {{"R", end.R}, {"Theta", end.theta}, {"Z", end.Z}}},
                     {"length", std::abs(end.s)}});
    ctx.log("seed " + std::to_string(i) + ": " + to_string(traj.status()) + " at t = " + format_number(end.t));
  }
  ctx.write("trace", {{"field", field->name()}, {"paths", paths}});
}

void run_atlas(Context& ctx) {
  const AtlasSpec& spec = ctx.block(ctx.config.atlas, "atlas");
  const FieldSpec& fspec = ctx.field();
  const FieldPtr field = fspec.build();
  AtlasOptions opts;
  opts.threads = ctx.settings.threads;
  if (spec.z_in) opts.z_in = *spec.z_in;
  ctx.probe = "map construction";
  const StreamlineMap map = build_streamline_map(field, spec.t, spec.r0, spec.z, opts);
  write_text(ctx.out("map.csv"), map_csv(map).str());

  const double dt = spec.dt > 0.0 ? spec.dt : default_rate_step(fspec.inflow_or_default(), spec.t);
  std::vector<RateProbe> probes;
  Json rows = Json::array();
  for (const auto& p : spec.probes) {
    ctx.probe = "rates at r0 = " + format_number(p.r0) + ", z = " + format_number(p.z);
    RateProbe rp{p.r0, p.z, laminar_rate_x(map, p.r0, p.z), laminar_rate_t(field, spec.t, dt, p.r0, p.z, opts)};
    Json terms = Json::object();
    for (std::size_t k = 0; k < rp.x.terms.size(); ++k) terms[LaminarRateX::names()[k]] = rp.x.terms[k];
    rows.push_back({{"r0", p.r0},
                    {"z", p.z},
                    {"L_x", rp.x.value},
                    {"L_x_terms", terms},
                    {"L_t", rp.t.value},
                    {"L_t_terms", rp.t.terms},
                    {"L_t_half_step", rp.t.value_half_step},
                    {"dt", rp.t.dt}});
    probes.push_back(rp);
  }
  write_text(ctx.out("rates.csv"), rates_csv(probes).str());
  ctx.write("atlas", {{"field", field->name()}, {"t", spec.t}, {"z_in", map.z_in()}, {"rates", rows}});
}

void run_frames(Context& ctx) {
  const FramesSpec& spec = ctx.block(ctx.config.frames, "frames");
  const FieldPtr field = ctx.field().build();
  ctx.probe = "trajectory";
  const Trajectory traj = integrate_trajectory(field, spec.seed, spec.t0, spec.t1, ctx.config.trajectory);
  const ArcLengthTrajectory arc = reparametrize_arclength(traj);
  std::vector<FrenetSample> frames;
  Json samples = Json::array();
  int sign_changes = 0;
  for (int i = 0; i < spec.samples; ++i) {
    const double s = arc.s_min() + arc.length() * i / (spec.samples - 1);
    ctx.probe = "frame at s = " + format_number(s);
    frames.push_back(frenet_apparatus(arc, s));
    if (i > 0 && frames[i].orientation != frames[i - 1].orientation) ++sign_changes;
    samples.push_back(frames.back());
  }
  write_text(ctx.out("frames.csv"), frames_csv(frames).str());

  Json axis = Json::array();
  if (!spec.axis_z.empty()) {
    ctx.probe = "axial view";
    const AxisLengthView view = axis_length_view(traj);
    for (double z : spec.axis_z) {
      ctx.probe = "swirl angle derivatives at z = " + format_number(z);
      const ThetaDerivatives d = theta_derivatives(view, z);
      axis.push_back({{"z", z},           {"r", d.r},
                      {"theta1", d.theta1}, {"theta2", d.theta2}, {"theta3", d.theta3},
                      {"main2", d.main2},   {"main3", d.main3},
                      {"remainder2", d.remainder2}, {"remainder3", d.remainder3},
                      {"axis_view_curvature", axis_view_curvature(view.at(z))}});
    }
  }
  Json tube = Json::array();
  for (const auto& x : spec.points) {
    ctx.probe = "tube coordinates of a point";
    const NormalCoordinates nc = normal_coordinates(arc, x);
    tube.push_back({{"point", {x[0], x[1], x[2]}},
                    {"theta_bar", nc.theta_bar},
                    {"r_bar", nc.r_bar},
                    {"z_bar", nc.z_bar},
                    {"residual", nc.residual},
                    {"tube_radius", nc.tube_radius}});
  }
  ctx.write("frames", {{"field", field->name()},
                       {"length", arc.length()},
                       {"orientation_changes", sign_changes},
                       {"samples", samples},
                       {"axis", axis},
                       {"tube_coordinates", tube}});
}

void run_identities(Context& ctx) {
  const IdentitiesSpec& spec = ctx.block(ctx.config.identities, "identities");
  const FieldPtr field = ctx.field().build();
  ctx.probe = "trajectory";
  const Trajectory traj = integrate_trajectory(field, spec.seed, spec.t0, spec.t1, ctx.config.trajectory);
  std::vector<IdentityReport> reports;
  Json probes = Json::array();
  bool all = true;
  for (double t : spec.probes) {
    ctx.probe = "identities at t = " + format_number(t);
    reports.push_back(check_pressure_identities(field, traj, t, spec.steps));
    const RotationBalance rb = rotation_balance(field, traj, t);
    const KeyInequalities key = key_inequalities(field, traj, t, ctx.config.scan.value_or(ScanParams{}));
    all = all && reports.back().pass;
    probes.push_back({{"identities", reports.back()}, {"rotation_balance", rb}, {"key_inequalities", key}});
    ctx.log("t = " + format_number(t) + ": identities " + (reports.back().pass ? "pass" : "fail"));
  }
  write_text(ctx.out("identities.csv"), identities_csv(reports).str());
  ctx.write("identities", {{"field", field->name()}, {"all_pass", all}, {"probes", probes}});
}

void run_scan(Context& ctx) {
  ScanParams p = ctx.block(ctx.config.scan, "scan");
  p.threads = ctx.settings.threads;
  ctx.probe = "instability scan";
  const ScanTable table = instability_scan(p);
  write_text(ctx.out("scan.csv"), scan_csv(table).str());
  if (!table.diagnostic.empty()) ctx.log(table.diagnostic);
  ctx.write("scan", table);
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const UnilateralViolation*>(&e)) return "unilateral_violation";
  if (dynamic_cast<const StructuralError*>(&e)) return "structural";
  if (dynamic_cast<const RangeError*>(&e)) return "range";
  if (dynamic_cast<const FrameUndefined*>(&e)) return "frame_undefined";
  if (dynamic_cast<const AmbiguityError*>(&e)) return "ambiguity";
  if (dynamic_cast<const StagnationError*>(&e)) return "stagnation";
  return "error";
}

}  // namespace

FieldPtr FieldSpec::build() const { return make_catalog_field(name, params, inflow_or_default()); }

ScenarioConfig parse_scenario(const Json& doc) {
  expect_object(doc, "scenario",
                {"schema_version", "field", "output", "threads", "tolerances", "trace", "atlas", "frames",
                 "identities", "scan"});
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
    throw ValidationError("scenario needs an integer schema_version");
  ScenarioConfig c;
  c.schema_version = doc.at("schema_version").get<int>();
  if (c.schema_version != kSchemaVersion)
    throw ValidationError("unsupported schema_version " + std::to_string(c.schema_version) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
  if (doc.contains("field")) c.field = parse_field(doc.at("field"));
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ValidationError("output must be a string");
    c.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("threads")) {
    const Json& t = doc.at("threads");
    if (!t.is_number_integer() || t.get<long long>() < 1 || t.get<long long>() > 1024)
      throw ValidationError("threads must be an integer in [1, 1024]");
    c.threads = static_cast<unsigned>(t.get<long long>());
  }
  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    expect_object(t, "tolerances", {"rel", "abs"});
    c.trajectory.rel_tol = positive(number_or(t, "rel", c.trajectory.rel_tol, "tolerances"), "tolerances.rel");
    c.trajectory.abs_tol = positive(number_or(t, "abs", c.trajectory.abs_tol, "tolerances"), "tolerances.abs");
  }
  if (doc.contains("trace")) c.trace = parse_trace(doc.at("trace"));
  if (doc.contains("atlas")) c.atlas = parse_atlas(doc.at("atlas"));
  if (doc.contains("frames")) c.frames = parse_frames(doc.at("frames"));
  if (doc.contains("identities")) c.identities = parse_identities(doc.at("identities"));
  if (doc.contains("scan")) c.scan = parse_scan(doc.at("scan"));
  c.source = doc;
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::fields: return "fields";
    case Subcommand::trace: return "trace";
    case Subcommand::atlas: return "atlas";
    case Subcommand::frames: return "frames";
    case Subcommand::identities: return "identities";
    case Subcommand::scan: return "scan";
  }
  return "?";
}

int run_scenario(const ScenarioConfig& config, Subcommand sub, const RunSettings& settings) {
  Context ctx{config, settings, {}};
  auto report = [&](const std::string& what) {
    if (settings.log) *settings.log << "axiflow " << to_string(sub) << ": " << what << '\n';
  };
  try {
    switch (sub) {
      case Subcommand::fields: run_fields(ctx); break;
      case Subcommand::trace: run_trace(ctx); break;
      case Subcommand::atlas: run_atlas(ctx); break;
      case Subcommand::frames: run_frames(ctx); break;
      case Subcommand::identities: run_identities(ctx); break;
      case Subcommand::scan: run_scan(ctx); break;
    }
    return 0;
  } catch (const ValidationError& e) {
    report(std::string("invalid input: ") + e.what());
    return 1;
  } catch (const NotCertified& e) {
    report(std::string("refused: ") + e.what());
    return 1;
  } catch (const IoError& e) {
    report(std::string("output error: ") + e.what());
    return 1;
  } catch (const Error& e) {
    report(std::string("numerical failure at ") + ctx.probe + ": " + e.what());
    const Json failure{{"error", error_kind(e)}, {"message", e.what()}, {"probe", ctx.probe}};
    try {
      write_json(ctx.out(std::string(to_string(sub)) + "_failure.json"),
                 make_document(std::string(to_string(sub)) + "_failure", config.source, failure));
    } catch (const IoError& io) {
      report(std::string("could not record the failure: ") + io.what());
    }
    return 2;
  }
}

}  // namespace axiflow
