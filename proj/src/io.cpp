#include "irrigation/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace irrigation {

using nlohmann::json;
using nlohmann::ordered_json;

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  // byte is the 1-based offset nlohmann reports for the offending character.
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y: " prefix.
    if (const auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError(what, line, column);
  }
}

void expect_object(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.is_object()) throw ParseError(path + ": expected an object");
  for (const auto& item : node.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ParseError((path.empty() ? "" : path + ".") + item.key() + ": unknown key");
  }
}

const json& require(const json& node, const std::string& path, const char* key) {
  const auto it = node.find(key);
  if (it == node.end()) {
    throw ParseError((path.empty() ? std::string("missing section '") + key + "'"
                                   : path + ": missing field '" + key + "'"));
  }
  return *it;
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) throw ParseError(path + ": expected a number");
  return node.get<double>();
}

double number_field(const json& node, const std::string& path, const char* key) {
  return number_at(require(node, path, key), path + "." + key);
}

const json& array_field(const json& node, const std::string& path, const char* key) {
  const json& value = require(node, path, key);
  if (!value.is_array()) throw ParseError((path.empty() ? std::string(key) : path + "." + key) + ": expected an array");
  return value;
}

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

ScenarioDraft parse_scenario_draft(std::string_view text) {
  const json doc = parse_json(text);
  expect_object(doc, "", {"description", "crops", "months", "coefficients", "limits"});

  ScenarioDraft draft;
  if (const auto it = doc.find("description"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("description: expected a string");
    draft.description = it->get<std::string>();
  }

  const json& crops = array_field(doc, "", "crops");
  for (std::size_t i = 0; i < crops.size(); ++i) {
    const std::string path = indexed("crops", i);
    expect_object(crops[i], path, {"name", "gross_revenue_per_ha", "variable_cost_per_ha"});
    CropSpec crop;
    const json& name = require(crops[i], path, "name");
    if (!name.is_string()) throw ParseError(path + ".name: expected a string");
    crop.name = name.get<std::string>();
    crop.gross_revenue_per_ha = number_field(crops[i], path, "gross_revenue_per_ha");
    crop.variable_cost_per_ha = number_field(crops[i], path, "variable_cost_per_ha");
    draft.crops.push_back(std::move(crop));
  }

  const json& months = array_field(doc, "", "months");
  for (std::size_t i = 0; i < months.size(); ++i) {
    const std::string path = indexed("months", i);
    expect_object(months[i], path, {"evapotranspiration", "rainfall", "inflow", "target_env_flow"});
    MonthSpec month;
    month.evapotranspiration = number_field(months[i], path, "evapotranspiration");
    month.rainfall = number_field(months[i], path, "rainfall");
    month.inflow = number_field(months[i], path, "inflow");
    month.target_env_flow = number_field(months[i], path, "target_env_flow");
    draft.months.push_back(month);
  }

  const json& coefficients = array_field(doc, "", "coefficients");
  for (std::size_t c = 0; c < coefficients.size(); ++c) {
    const std::string path = indexed("coefficients", c);
    if (!coefficients[c].is_array()) throw ParseError(path + ": expected an array");
    std::vector<double> row;
    for (std::size_t m = 0; m < coefficients[c].size(); ++m) row.push_back(number_at(coefficients[c][m], indexed(path, m)));
    draft.coefficients.push_back(std::move(row));
  }

  const json& limits = require(doc, "", "limits");
  expect_object(limits, "limits",
                {"pump_cap_total", "area_total", "area_min_per_crop", "surface_cost_per_gl", "pump_cost_per_gl",
                 "area_upper_per_crop", "env_flow_upper_per_month"});
  auto& lim = draft.limits;
  lim.pump_cap_total = number_field(limits, "limits", "pump_cap_total");
  lim.area_total = number_field(limits, "limits", "area_total");
  lim.area_min_per_crop = number_field(limits, "limits", "area_min_per_crop");
  lim.surface_cost_per_gl = number_field(limits, "limits", "surface_cost_per_gl");
  lim.pump_cost_per_gl = number_field(limits, "limits", "pump_cost_per_gl");
  lim.area_upper_per_crop = number_field(limits, "limits", "area_upper_per_crop");
  lim.env_flow_upper_per_month = number_field(limits, "limits", "env_flow_upper_per_month");
  return draft;
}

Scenario parse_scenario_text(std::string_view text) { return Scenario::create(parse_scenario_draft(text)); }

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario_text(read_file(path)); }

std::string scenario_to_text(const Scenario& scenario) {
  const ScenarioDraft draft = scenario.to_draft();
  ordered_json doc;
  if (!draft.description.empty()) doc["description"] = draft.description;
  doc["crops"] = ordered_json::array();
  for (const auto& c : draft.crops) {
    doc["crops"].push_back({{"name", c.name},
                            {"gross_revenue_per_ha", c.gross_revenue_per_ha},
                            {"variable_cost_per_ha", c.variable_cost_per_ha}});
  }
  doc["months"] = ordered_json::array();
  for (const auto& m : draft.months) {
    doc["months"].push_back({{"evapotranspiration", m.evapotranspiration},
                             {"rainfall", m.rainfall},
                             {"inflow", m.inflow},
                             {"target_env_flow", m.target_env_flow}});
  }
  doc["coefficients"] = draft.coefficients;
  const auto& l = draft.limits;
  doc["limits"] = {{"pump_cap_total", l.pump_cap_total},
                   {"area_total", l.area_total},
                   {"area_min_per_crop", l.area_min_per_crop},
                   {"surface_cost_per_gl", l.surface_cost_per_gl},
                   {"pump_cost_per_gl", l.pump_cost_per_gl},
                   {"area_upper_per_crop", l.area_upper_per_crop},
                   {"env_flow_upper_per_month", l.env_flow_upper_per_month}};
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_file(path, scenario_to_text(scenario));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string manifest_to_text(const RunManifest& m) {
  ordered_json doc;
  doc["tool_version"] = m.tool_version;
  doc["method"] = m.method;
  doc["scenario"] = {{"path", m.scenario_path}, {"sha256", m.scenario_sha256}};
  doc["output_sha256"] = m.output_sha256;
  doc["parameters"] = ordered_json::object();
  for (const auto& [k, v] : m.parameters) doc["parameters"][k] = v;
  doc["timestamps"] = {
      {"started_at", m.started_at}, {"finished_at", m.finished_at}, {"wall_time_seconds", m.wall_time_seconds}};
  return doc.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view text) {
  const json doc = parse_json(text);
  RunManifest m;
  try {
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.method = doc.at("method").get<std::string>();
    m.scenario_path = doc.at("scenario").at("path").get<std::string>();
    m.scenario_sha256 = doc.at("scenario").at("sha256").get<std::string>();
    m.output_sha256 = doc.at("output_sha256").get<std::string>();
    for (const auto& item : doc.at("parameters").items()) m.parameters[item.key()] = item.value().get<std::string>();
    const auto& ts = doc.at("timestamps");
    m.started_at = ts.at("started_at").get<std::string>();
    m.finished_at = ts.at("finished_at").get<std::string>();
    m.wall_time_seconds = ts.at("wall_time_seconds").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

std::string front_to_csv(const std::vector<ParetoPoint>& points) {
  std::vector<const ParetoPoint*> sorted;
  for (const auto& p : points) sorted.push_back(&p);
  std::stable_sort(sorted.begin(), sorted.end(), [](const ParetoPoint* a, const ParetoPoint* b) {
    return a->objectives.net_benefit < b->objectives.net_benefit;
  });
  std::string out = "net_benefit,efd,w1,source\n";
  for (const auto* p : sorted) {
    out += format_number(p->objectives.net_benefit);
    out += ',';
    out += format_number(p->objectives.efd);
    out += ',';
    if (p->weight) out += format_number(p->weight->w1());
    out += ',';
    out += to_string(p->source);
    out += '\n';
  }
  return out;
}

void export_front(const FrontResult& front, const std::filesystem::path& path, RunManifest manifest) {
  if (front.points.empty()) throw std::invalid_argument("cannot export an empty front");
  const std::string table = front_to_csv(front.points);
  write_file(path, table);
  manifest.output_sha256 = sha256_hex(table);
  write_file(manifest_path_for(path), manifest_to_text(manifest));
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, std::size_t line, std::size_t column, const char* name) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(std::string(name) + ": '" + field + "' is not a finite number", line, column);
  }
  return v;
}

}  // namespace

std::vector<FrontRow> parse_front_csv(std::string_view text) {
  std::vector<FrontRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != "net_benefit,efd,w1,source") throw ParseError("expected header net_benefit,efd,w1,source", line_no, 1);
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, found " + std::to_string(fields.size()), line_no, 1);
    }
    FrontRow row;
    row.line = line_no;
    std::size_t column = 1;
    row.objectives.net_benefit = parse_double(fields[0], line_no, column, "net_benefit");
    column += fields[0].size() + 1;
    row.objectives.efd = parse_double(fields[1], line_no, column, "efd");
    column += fields[1].size() + 1;
    if (!fields[2].empty()) row.w1 = parse_double(fields[2], line_no, column, "w1");
    column += fields[2].size() + 1;
    const auto source = parse_point_source(fields[3]);
    if (!source) throw ParseError("unknown source '" + fields[3] + "'", line_no, column);
    row.source = *source;
    rows.push_back(row);
  }
  if (!header_seen) throw ParseError("empty front file");
  return rows;
}

std::vector<FrontRow> read_front(const std::filesystem::path& path) { return parse_front_csv(read_file(path)); }

namespace {

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string month_label(std::size_t m, std::size_t count) {
  static constexpr const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  return count == 12 ? names[m] : "M" + std::to_string(m + 1);
}

}  // namespace

std::string format_plan(const AllocationPlan& plan, const Scenario& scenario) {
  if (plan.area_per_crop.size() != scenario.crop_count() || plan.env_flow_per_month.size() != scenario.month_count()) {
    throw std::invalid_argument("plan dimensions do not match the scenario");
  }
  std::string out = "crops";
  for (const auto& crop : scenario.crops()) out += "," + csv_field(crop.name);
  out += "\nX_c (ha)";
  for (double x : plan.area_per_crop) out += "," + format_number(x);
  out += "\n\nmonths";
  for (std::size_t m = 0; m < scenario.month_count(); ++m) out += "," + month_label(m, scenario.month_count());
  out += "\nEnv.Flow (GL)";
  for (double e : plan.env_flow_per_month) out += "," + format_number(e);
  out += "\n";
  return out;
}

void export_plan(const AllocationPlan& plan, const Scenario& scenario, const std::filesystem::path& path) {
  write_file(path, format_plan(plan, scenario));
}

}  // namespace irrigation
