#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "axiflow/atlas.hpp"
#include "axiflow/field_ops.hpp"
#include "axiflow/frenet.hpp"
#include "axiflow/identity.hpp"
#include "axiflow/scan.hpp"
#include "axiflow/trajectory.hpp"

namespace axiflow {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal form that reads back to the same double; "nan", "inf", "-inf".
std::string format_number(double v);

/// CSV text: a "# columns: ..." comment, an optional "# " note, the header row, then rows.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> columns, std::string note = {});
  void add_row(std::vector<Cell> cells);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string note_;
  std::vector<std::vector<std::string>> rows_;
};

/// Throws IoError when the file cannot be written. Creates parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

/// {"schema_version", "kind", "config", "result"}.
Json make_document(const std::string& kind, const Json& config, Json result);

// JSON forms. Non-finite numbers are written as null and read back as NaN.
void to_json(Json& j, const IdentityCheck& c);
void from_json(const Json& j, IdentityCheck& c);
void to_json(Json& j, const IdentityReport& r);
void from_json(const Json& j, IdentityReport& r);
void to_json(Json& j, const KeyInequalities& k);
void from_json(const Json& j, KeyInequalities& k);
void to_json(Json& j, const ScanRow& r);
void from_json(const Json& j, ScanRow& r);
void to_json(Json& j, const ScanSkip& s);
void from_json(const Json& j, ScanSkip& s);
void to_json(Json& j, const ScanTable& t);
void from_json(const Json& j, ScanTable& t);
void to_json(Json& j, const RotationBalance& b);
void to_json(Json& j, const Certification& c);
void to_json(Json& j, const FrenetSample& f);

// CSV tables.
CsvTable trajectory_csv(const Trajectory& traj, int samples);
CsvTable frames_csv(const std::vector<FrenetSample>& frames);
CsvTable identities_csv(const std::vector<IdentityReport>& reports);
CsvTable scan_csv(const ScanTable& table);
/// Grid dump (r0, z, R and its derivatives) of a streamline map.
CsvTable map_csv(const StreamlineMap& map);

struct RateProbe {
  double r0 = 0.0, z = 0.0;
  LaminarRateX x;
  LaminarRateT t;
};
CsvTable rates_csv(const std::vector<RateProbe>& probes);

}  // namespace axiflow
