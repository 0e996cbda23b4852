#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irrigation/evaluation.hpp"
#include "irrigation/pareto.hpp"
#include "irrigation/scenario.hpp"

namespace irrigation {

/// Malformed document: bad JSON syntax, a missing section or field, a value
/// of the wrong type or an unknown key. line/column are 1-based; 0 when the
/// error has no single source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario documents are JSON objects:
//
//   {
//     "description": "...",                      (optional)
//     "crops": [{"name", "gross_revenue_per_ha", "variable_cost_per_ha"}, ...],
//     "months": [{"evapotranspiration", "rainfall", "inflow", "target_env_flow"}, ...],
//     "coefficients": [[K_c1, ..., K_cM], ...],  one row per crop
//     "limits": {"pump_cap_total", "area_total", "area_min_per_crop",
//                "surface_cost_per_gl", "pump_cost_per_gl",
//                "area_upper_per_crop", "env_flow_upper_per_month"}
//   }

/// Throws ParseError.
ScenarioDraft parse_scenario_draft(std::string_view text);
/// Throws ParseError or ValidationError.
Scenario parse_scenario_text(std::string_view text);
/// Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::filesystem::path& path);

std::string scenario_to_text(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for single-writer use: truncate then write.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string scenario_path;
  std::string scenario_sha256;
  std::string output_sha256;
  std::string method;
  std::map<std::string, std::string> parameters;
  std::string tool_version;
  std::string started_at;
  std::string finished_at;
  double wall_time_seconds = 0.0;
};

std::string manifest_to_text(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view text);

/// ISO 8601 UTC, second resolution.
std::string utc_timestamp();

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

/// Front table: header "net_benefit,efd,w1,source", one row per point sorted
/// by net benefit ascending, numbers at 9 significant digits. w1 is empty for
/// points without a weight.
std::string front_to_csv(const std::vector<ParetoPoint>& points);

/// Writes the front table to path and the manifest, with output_sha256
/// filled in, to manifest_path_for(path). Throws std::invalid_argument on an
/// empty front and IoError on write failure.
void export_front(const FrontResult& front, const std::filesystem::path& path, RunManifest manifest);

struct FrontRow {
  ObjectivePair objectives;
  std::optional<double> w1;
  PointSource source = PointSource::endpoint;
  std::size_t line = 0;
};

/// Throws ParseError naming the line of a malformed row.
std::vector<FrontRow> parse_front_csv(std::string_view text);
std::vector<FrontRow> read_front(const std::filesystem::path& path);

/// Two tables separated by a blank line: crop areas (ha), then monthly
/// environmental flows (GL).
std::string format_plan(const AllocationPlan& plan, const Scenario& scenario);
void export_plan(const AllocationPlan& plan, const Scenario& scenario, const std::filesystem::path& path);

/// "%.9g"
std::string format_number(double value);

}  // namespace irrigation
