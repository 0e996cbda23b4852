#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace irrigation {

/// One cultivated crop. Revenue folds price and yield into a single
/// currency-per-hectare figure.
struct CropSpec {
  std::string name;
  double gross_revenue_per_ha = 0.0;
  double variable_cost_per_ha = 0.0;

  bool operator==(const CropSpec&) const = default;
};

/// Hydrology of one planning period. ET and rainfall are GL per hectare,
/// inflow and the environmental target are GL.
struct MonthSpec {
  double evapotranspiration = 0.0;
  double rainfall = 0.0;
  double inflow = 0.0;
  double target_env_flow = 0.0;

  bool operator==(const MonthSpec&) const = default;
};

struct SystemLimits {
  double pump_cap_total = 0.0;            // GL over the horizon
  double area_total = 0.0;                // ha
  double area_min_per_crop = 0.0;         // ha
  double surface_cost_per_gl = 0.0;       // currency / GL
  double pump_cost_per_gl = 0.0;          // currency / GL
  double area_upper_per_crop = 0.0;       // ha
  double env_flow_upper_per_month = 0.0;  // GL

  bool operator==(const SystemLimits&) const = default;
};

/// Unvalidated scenario contents, as read from a file or assembled in code.
/// `coefficients` is crops x months.
struct ScenarioDraft {
  std::string description;
  std::vector<CropSpec> crops;
  std::vector<MonthSpec> months;
  std::vector<std::vector<double>> coefficients;
  SystemLimits limits;
};

enum class IssueKind {
  dimension_mismatch,
  negative_parameter,
  non_finite,
  infeasible_minimum_area,
  bound_order,
  empty_name,
  duplicate_name,
};

const char* to_string(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string path;  // e.g. "months[3].inflow"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(IssueKind kind) const;
  bool mentions(const std::string& path) const;
  std::string to_string() const;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Dense crops x months matrix of crop coefficients.
class CoefficientMatrix {
 public:
  CoefficientMatrix() = default;
  CoefficientMatrix(std::size_t crops, std::size_t months, std::vector<double> values);

  std::size_t crops() const { return crops_; }
  std::size_t months() const { return months_; }
  double operator()(std::size_t crop, std::size_t month) const { return values_[crop * months_ + month]; }

  bool operator==(const CoefficientMatrix&) const = default;

 private:
  std::size_t crops_ = 0;
  std::size_t months_ = 0;
  std::vector<double> values_;
};

/// Immutable, validated problem instance. Only obtainable through
/// validate_scenario() / Scenario::create(), so every invariant holds for the
/// lifetime of the object and it can be shared freely between threads.
class Scenario {
 public:
  static Scenario create(ScenarioDraft draft);  // throws ValidationError

  const std::string& description() const { return description_; }
  const std::vector<CropSpec>& crops() const { return crops_; }
  const std::vector<MonthSpec>& months() const { return months_; }
  const CoefficientMatrix& coefficients() const { return coefficients_; }
  const SystemLimits& limits() const { return limits_; }

  std::size_t crop_count() const { return crops_.size(); }
  std::size_t month_count() const { return months_.size(); }

  /// Per-hectare demand K*ET - R, precomputed at construction.
  double demand_per_ha(std::size_t crop, std::size_t month) const { return demand_[crop * months_.size() + month]; }

  double total_target_env_flow() const;
  ScenarioDraft to_draft() const;

  bool operator==(const Scenario& other) const;

 private:
  Scenario() = default;
  friend std::variant<Scenario, ValidationReport> validate_scenario(ScenarioDraft draft);

  std::string description_;
  std::vector<CropSpec> crops_;
  std::vector<MonthSpec> months_;
  CoefficientMatrix coefficients_;
  SystemLimits limits_;
  std::vector<double> demand_;
};

/// Checks every invariant and either seals the scenario or returns a report
/// listing all violations (not just the first).
std::variant<Scenario, ValidationReport> validate_scenario(ScenarioDraft draft);

/// K_cm * ET_m - R_m in GL/ha. Negative when rainfall exceeds crop need.
/// Throws std::out_of_range on bad indices.
double crop_water_demand(const Scenario& scenario, std::size_t crop, std::size_t month);

}  // namespace irrigation
