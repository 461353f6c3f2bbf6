#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "axiflow/catalog.hpp"
#include "axiflow/report_io.hpp"
#include "axiflow/scenario.hpp"
#include "support/oracles.hpp"

using namespace axiflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axiflow_io_tests") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json helix_scenario() {
  return Json::parse(R"({
    "schema_version": 1,
    "field": {"name": "rigid_swirl_pulsatile", "params": {"omega": 1.0, "r_max": 2.0},
              "inflow": {"kind": "polynomial", "coefficients": [1.0, 0.0, 1.0]}},
    "trace": {"seeds": [{"r": 1.0, "z": 0.0}], "t0": 0.0, "t1": 1.0, "samples": 11},
    "identities": {"seed": {"r": 1.0, "z": 0.0}, "t1": 1.0, "probes": [0.5]}
  })");
}

void expect_invalid(const std::string& text, const std::string& fragment) {
  INFO(text);
  try {
    parse_scenario(Json::parse(text));
    FAIL("accepted an invalid scenario");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(fragment) != std::string::npos);
  }
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("numbers round-trip through their shortest text") {
  auto gen = oracle::rng(60);
  std::uniform_int_distribution<std::uint64_t> bits;
  int tested = 0;
  while (tested < 2000) {
    const std::uint64_t b = bits(gen);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
    ++tested;
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv tables carry a column comment") {
  CsvTable t({"a", "b", "c"}, "demo");
  t.add_row({1.5, 2LL, std::string("x")});
  const std::string s = t.str();
  CHECK(s == "# columns: a b c\n# demo\na,b,c\n1.5,2,x\n");
  CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
}

TEST_CASE("identity reports and scan tables round-trip through JSON") {
  const auto f = rigid_swirl_pulsatile_field(1.0, InflowProfile::polynomial({1.0, 0.0, 1.0}), 2.0);
  const auto traj = integrate_trajectory(f, {1.0, 0.0, 0.0}, 0.0, 1.0);
  const IdentityReport rep = check_pressure_identities(f, traj, 0.5);
  const Json j = rep;
  CHECK(Json::parse(j.dump()).get<IdentityReport>() == rep);

  ScanParams p;
  p.g1 = {20.0, 50.0};
  p.g2 = {1e4};
  const ScanTable table = instability_scan(p);
  const Json k = table;
  const ScanTable back = Json::parse(k.dump()).get<ScanTable>();
  CHECK(back == table);
}

TEST_CASE("scenario validation names the problem") {
  expect_invalid(R"({"schema_version": 2})", "schema_version");
  expect_invalid(R"({"schema_version": 1, "colour": 1})", "colour");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "nozzle", "inflow": {"kind": "constant", "value": 1}, "x": 1}})", "'x'");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "nozzle", "inflow": {"kind": "constant", "value": 1, "y": 2}}})", "'y'");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "swirling_strain", "params": {"gamma": 1},
                     "inflow": {"kind": "constant", "value": 1}}})", "omega0, z_min");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "nozzle"}})", "needs an inflow");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "radial_expansion", "params": {"rate": 1},
                     "inflow": {"kind": "constant", "value": 1}}})", "takes no inflow");
  expect_invalid(R"({"schema_version": 1, "field": {"name": "warp"}})", "unknown field");
  expect_invalid(R"({"schema_version": 1, "tolerances": {"rel": 0}})", "tolerances.rel");
  expect_invalid(R"({"schema_version": 1, "trace": {"seeds": [{"r": 1, "z": 0, "w": 3}], "t1": 1}})", "'w'");
  expect_invalid(R"({"schema_version": 1, "scan": {"seeds": [{"r0": 1, "z": 0, "q": 0}]}})", "'q'");
  expect_invalid(R"({"schema_version": 1, "frames": {"seed": {"r": 1, "z": 0}, "t1": 1, "points": [[1, 2]]}})", "points");
  expect_invalid(R"({"schema_version": 1, "identities": {"seed": {"r": 1, "z": 0}, "t1": 1, "probes": [], "k": 1}})", "'k'");
  expect_invalid(R"({"schema_version": 1, "atlas": {"r0": [0.5], "z": [0]}})", "two inlet radii");
  expect_invalid(R"({"schema_version": 1, "threads": 0})", "threads");
  CHECK_NOTHROW(parse_scenario(helix_scenario()));
}

TEST_CASE("trace output follows the helix and reruns are byte-identical") {
  const ScenarioConfig c = parse_scenario(helix_scenario());
  const fs::path a = scratch("trace_a"), b = scratch("trace_b");
  RunSettings s;
  s.out_dir = a;
  REQUIRE(run_scenario(c, Subcommand::trace, s) == 0);
  s.out_dir = b;
  REQUIRE(run_scenario(c, Subcommand::trace, s) == 0);
  CHECK(slurp(a / "trace.json") == slurp(b / "trace.json"));
  CHECK(slurp(a / "trajectory_0.csv") == slurp(b / "trajectory_0.csv"));

  const Json doc = Json::parse(slurp(a / "trace.json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["kind"] == "trace");
  const Json& end = doc["result"]["paths"][0]["end"];
  CHECK(end["R"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(end["Theta"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(end["Z"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(slurp(a / "trajectory_0.csv").rfind("# columns: t s R Theta Z v_r v_theta v_z\n", 0) == 0);
}

TEST_CASE("identities output") {
  const ScenarioConfig c = parse_scenario(helix_scenario());
  const fs::path out = scratch("identities");
  RunSettings s;
  s.out_dir = out;
  REQUIRE(run_scenario(c, Subcommand::identities, s) == 0);
  const Json doc = Json::parse(slurp(out / "identities.json"));
  const Json& probe = doc["result"]["probes"][0];
  CHECK(probe["identities"]["identities"].size() == 4);
  CHECK(probe["rotation_balance"].contains("normalized"));
  CHECK(probe["key_inequalities"].contains("verdict"));
  CHECK(fs::exists(out / "identities.csv"));
}

TEST_CASE("an empty scan is a successful run") {
  Json j = Json::parse(R"({"schema_version": 1, "scan": {"beta": 0.4, "g1": [20], "g2": [1e4]}})");
  const fs::path out = scratch("empty_scan");
  RunSettings s;
  s.out_dir = out;
  CHECK(run_scenario(parse_scenario(j), Subcommand::scan, s) == 0);
  const Json doc = Json::parse(slurp(out / "scan.json"));
  CHECK(doc["result"]["rows"].empty());
  CHECK_FALSE(doc["result"]["diagnostic"].get<std::string>().empty());
}

TEST_CASE("exit codes") {
  // Straight path: the frame is undefined, a numerical failure.
  Json j = Json::parse(R"({"schema_version": 1,
    "field": {"name": "uniform", "params": {}, "inflow": {"kind": "polynomial", "coefficients": [1, 1]}},
    "identities": {"seed": {"r": 0.5, "z": 0}, "t1": 1, "probes": [0.5]}})");
  const fs::path out = scratch("failure");
  RunSettings s;
  s.out_dir = out;
  CHECK(run_scenario(parse_scenario(j), Subcommand::identities, s) == 2);
  const Json doc = Json::parse(slurp(out / "identities_failure.json"));
  CHECK(doc["result"]["error"] == "frame_undefined");
  CHECK_FALSE(doc["result"]["probe"].get<std::string>().empty());

  // Missing block.
  CHECK(run_scenario(parse_scenario(j), Subcommand::trace, s) == 1);

  // Output path below a regular file.
  const fs::path blocker = scratch("blocked") / "file";
  std::ofstream(blocker) << "x";
  s.out_dir = blocker / "sub";
  CHECK(run_scenario(parse_scenario(helix_scenario()), Subcommand::trace, s) == 1);
  CHECK_THROWS_AS(write_text(blocker / "sub" / "a.txt", "x"), IoError);
}

}
