#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "axiflow/identity.hpp"
#include "axiflow/inflow.hpp"
#include "axiflow/report_io.hpp"
#include "axiflow/trajectory.hpp"

namespace axiflow {

/// Catalog field plus its inflow. Every parameter of the catalog entry must be given.
struct FieldSpec {
  std::string name;
  std::map<std::string, double> params;
  std::optional<InflowProfile> inflow;

  InflowProfile inflow_or_default() const { return inflow.value_or(InflowProfile::constant(1.0)); }
  FieldPtr build() const;
};

struct TraceSpec {
  std::vector<Seed> seeds;
  double t0 = 0.0, t1 = 1.0;
  int samples = 101;
};

struct AtlasSpec {
  double t = 0.0;
  std::vector<double> r0;
  std::vector<double> z;
  std::vector<ScanParams::SeedPoint> probes;
  double dt = 0.0;  ///< 0 picks default_rate_step
  std::optional<double> z_in;
};

struct FramesSpec {
  Seed seed;
  double t0 = 0.0, t1 = 1.0;
  int samples = 101;
  std::vector<double> axis_z;                ///< stations for swirl-angle derivatives
  std::vector<Eigen::Vector3d> points;       ///< Cartesian points for tube coordinates
};

struct IdentitiesSpec {
  Seed seed;
  double t0 = 0.0, t1 = 1.0;
  std::vector<double> probes;  ///< probe times
  IdentitySteps steps;
};

/// Parsed scenario file (JSON, schema_version 1). Unknown keys are rejected at every level.
struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::optional<FieldSpec> field;
  std::optional<std::string> output;
  std::optional<unsigned> threads;
  TrajectoryOptions trajectory;
  std::optional<TraceSpec> trace;
  std::optional<AtlasSpec> atlas;
  std::optional<FramesSpec> frames;
  std::optional<IdentitiesSpec> identities;
  std::optional<ScanParams> scan;
  Json source;  ///< the document as read, echoed into every JSON output
};

/// Throws ValidationError naming the offending key.
ScenarioConfig parse_scenario(const Json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

enum class Subcommand { fields, trace, atlas, frames, identities, scan };
const char* to_string(Subcommand s);

struct RunSettings {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
  bool verbose = false;
  std::ostream* log = nullptr;  ///< progress and error messages
};

/// Exit status: 0 success, 1 invalid input or unwritable output, 2 numerical failure
/// (a <subcommand>_failure.json with the failing probe is written to out_dir).
int run_scenario(const ScenarioConfig& config, Subcommand sub, const RunSettings& settings);

}  // namespace axiflow
