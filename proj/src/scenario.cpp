#include "irrigation/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace irrigation {

const char* to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::dimension_mismatch: return "dimension mismatch";
    case IssueKind::negative_parameter: return "negative parameter";
    case IssueKind::non_finite: return "non-finite parameter";
    case IssueKind::infeasible_minimum_area: return "infeasible minimum-area total";
    case IssueKind::bound_order: return "bound order";
    case IssueKind::empty_name: return "empty name";
    case IssueKind::duplicate_name: return "duplicate name";
  }
  return "unknown";
}

bool ValidationReport::has(IssueKind kind) const {
  for (const auto& issue : issues) {
    if (issue.kind == kind) return true;
  }
  return false;
}

bool ValidationReport::mentions(const std::string& path) const {
  for (const auto& issue : issues) {
    if (issue.path == path) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << issue.path << ": " << irrigation::to_string(issue.kind) << ": " << issue.message << '\n';
  }
  return out.str();
}

namespace {

std::string first_line(const ValidationReport& report) {
  if (report.issues.empty()) return "scenario validation failed";
  const auto& issue = report.issues.front();
  std::string text = issue.path + ": " + issue.message;
  if (report.issues.size() > 1) text += " (+" + std::to_string(report.issues.size() - 1) + " more)";
  return text;
}

class Checker {
 public:
  void non_negative(double value, const std::string& path) {
    if (!std::isfinite(value)) {
      add(IssueKind::non_finite, path, "must be finite");
    } else if (value < 0.0) {
      std::ostringstream msg;
      msg << "must be >= 0 (got " << value << ")";
      add(IssueKind::negative_parameter, path, msg.str());
    }
  }

  void add(IssueKind kind, std::string path, std::string message) {
    report.issues.push_back({kind, std::move(path), std::move(message)});
  }

  ValidationReport report;
};

std::string index_path(const char* section, std::size_t i) {
  return std::string(section) + "[" + std::to_string(i) + "]";
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(first_line(report)), report_(std::move(report)) {}

CoefficientMatrix::CoefficientMatrix(std::size_t crops, std::size_t months, std::vector<double> values)
    : crops_(crops), months_(months), values_(std::move(values)) {
  if (values_.size() != crops_ * months_) {
    throw std::invalid_argument("coefficient matrix size does not match crops x months");
  }
}

double Scenario::total_target_env_flow() const {
  double total = 0.0;
  for (const auto& month : months_) total += month.target_env_flow;
  return total;
}

ScenarioDraft Scenario::to_draft() const {
  ScenarioDraft draft;
  draft.description = description_;
  draft.crops = crops_;
  draft.months = months_;
  draft.limits = limits_;
  draft.coefficients.assign(crop_count(), std::vector<double>(month_count()));
  for (std::size_t c = 0; c < crop_count(); ++c) {
    for (std::size_t m = 0; m < month_count(); ++m) draft.coefficients[c][m] = coefficients_(c, m);
  }
  return draft;
}

bool Scenario::operator==(const Scenario& other) const {
  return description_ == other.description_ && crops_ == other.crops_ && months_ == other.months_ &&
         coefficients_ == other.coefficients_ && limits_ == other.limits_;
}

Scenario Scenario::create(ScenarioDraft draft) {
  auto result = validate_scenario(std::move(draft));
  if (auto* report = std::get_if<ValidationReport>(&result)) throw ValidationError(std::move(*report));
  return std::get<Scenario>(std::move(result));
}

std::variant<Scenario, ValidationReport> validate_scenario(ScenarioDraft draft) {
  Checker check;
  const std::size_t n_crops = draft.crops.size();
  const std::size_t n_months = draft.months.size();

  if (n_crops == 0) check.add(IssueKind::dimension_mismatch, "crops", "at least one crop is required");
  if (n_months == 0) check.add(IssueKind::dimension_mismatch, "months", "at least one month is required");

  std::set<std::string> seen;
  for (std::size_t c = 0; c < n_crops; ++c) {
    const auto& crop = draft.crops[c];
    const std::string base = index_path("crops", c);
    if (crop.name.empty()) {
      check.add(IssueKind::empty_name, base + ".name", "must be nonempty");
    } else if (!seen.insert(crop.name).second) {
      check.add(IssueKind::duplicate_name, base + ".name", "duplicate crop name '" + crop.name + "'");
    }
    check.non_negative(crop.gross_revenue_per_ha, base + ".gross_revenue_per_ha");
    check.non_negative(crop.variable_cost_per_ha, base + ".variable_cost_per_ha");
  }

  for (std::size_t m = 0; m < n_months; ++m) {
    const auto& month = draft.months[m];
    const std::string base = index_path("months", m);
    check.non_negative(month.evapotranspiration, base + ".evapotranspiration");
    check.non_negative(month.rainfall, base + ".rainfall");
    check.non_negative(month.inflow, base + ".inflow");
    check.non_negative(month.target_env_flow, base + ".target_env_flow");
  }

  if (draft.coefficients.size() != n_crops) {
    check.add(IssueKind::dimension_mismatch, "coefficients",
              "expected " + std::to_string(n_crops) + " rows (one per crop), got " +
                  std::to_string(draft.coefficients.size()));
  }
  for (std::size_t c = 0; c < draft.coefficients.size(); ++c) {
    const auto& row = draft.coefficients[c];
    const std::string base = index_path("coefficients", c);
    if (row.size() != n_months) {
      check.add(IssueKind::dimension_mismatch, base,
                "expected " + std::to_string(n_months) + " entries (one per month), got " +
                    std::to_string(row.size()));
    }
    for (std::size_t m = 0; m < row.size(); ++m) check.non_negative(row[m], base + "[" + std::to_string(m) + "]");
  }

  const auto& lim = draft.limits;
  check.non_negative(lim.pump_cap_total, "limits.pump_cap_total");
  check.non_negative(lim.area_total, "limits.area_total");
  check.non_negative(lim.area_min_per_crop, "limits.area_min_per_crop");
  check.non_negative(lim.surface_cost_per_gl, "limits.surface_cost_per_gl");
  check.non_negative(lim.pump_cost_per_gl, "limits.pump_cost_per_gl");
  check.non_negative(lim.area_upper_per_crop, "limits.area_upper_per_crop");
  check.non_negative(lim.env_flow_upper_per_month, "limits.env_flow_upper_per_month");

  if (lim.area_min_per_crop > lim.area_upper_per_crop) {
    std::ostringstream msg;
    msg << "area_min_per_crop " << lim.area_min_per_crop << " exceeds area_upper_per_crop "
        << lim.area_upper_per_crop;
    check.add(IssueKind::bound_order, "limits.area_min_per_crop", msg.str());
  }
  const double min_total = static_cast<double>(n_crops) * lim.area_min_per_crop;
  if (min_total > lim.area_total) {
    std::ostringstream msg;
    msg << n_crops << " crops x " << lim.area_min_per_crop << " ha = " << min_total << " ha exceeds area_total "
        << lim.area_total << " ha";
    check.add(IssueKind::infeasible_minimum_area, "limits.area_min_per_crop", msg.str());
  }

  if (!check.report.ok()) return std::move(check.report);

  Scenario scenario;
  scenario.description_ = std::move(draft.description);
  scenario.crops_ = std::move(draft.crops);
  scenario.months_ = std::move(draft.months);
  scenario.limits_ = draft.limits;

  std::vector<double> flat;
  flat.reserve(n_crops * n_months);
  for (const auto& row : draft.coefficients) flat.insert(flat.end(), row.begin(), row.end());
  scenario.coefficients_ = CoefficientMatrix(n_crops, n_months, std::move(flat));

  scenario.demand_.resize(n_crops * n_months);
  for (std::size_t c = 0; c < n_crops; ++c) {
    for (std::size_t m = 0; m < n_months; ++m) {
      const auto& month = scenario.months_[m];
      scenario.demand_[c * n_months + m] =
          scenario.coefficients_(c, m) * month.evapotranspiration - month.rainfall;
    }
  }
  return scenario;
}

double crop_water_demand(const Scenario& scenario, std::size_t crop, std::size_t month) {
  if (crop >= scenario.crop_count()) throw std::out_of_range("crop index " + std::to_string(crop) + " out of range");
  if (month >= scenario.month_count()) {
    throw std::out_of_range("month index " + std::to_string(month) + " out of range");
  }
  return scenario.demand_per_ha(crop, month);
}

}  // namespace irrigation
