#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "irrigation/io.hpp"
#include "irrigation/models.hpp"
#include "irrigation/pareto.hpp"

using namespace irrigation;
using irrigation::testing::bundled;
using irrigation::testing::data_file;
using irrigation::testing::scratch_dir;

namespace {

std::string toy_text() { return read_file(data_file("toy-two-month")); }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ParetoPoint point(double nb, double e, std::optional<double> w1, PointSource src) {
  ParetoPoint p;
  p.objectives = {nb, e};
  if (w1) p.weight = WeightPair::from_w1(*w1);
  p.source = src;
  return p;
}

RunManifest manifest() {
  RunManifest m;
  m.scenario_path = "scenario.json";
  m.scenario_sha256 = "00";
  m.method = "test";
  m.parameters = {{"grid_points", "3"}};
  m.tool_version = "0";
  m.started_at = utc_timestamp();
  m.finished_at = utc_timestamp();
  return m;
}

}  // namespace

TEST_CASE("bundled representative file loads") {
  const Scenario s = load_scenario(data_file("representative"));
  CHECK(s.crop_count() == 10);
  CHECK(s.month_count() == 12);
  CHECK_FALSE(s.description().empty());
}

TEST_CASE("missing section is a parse error naming it") {
  std::string text = toy_text();
  text = replace_once(text, "\"coefficients\"", "\"coefficientz\"");
  try {
    (void)parse_scenario_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    // The renamed key is unknown; drop it instead to get a missing section.
    CHECK(std::string(e.what()).find("coefficientz") != std::string::npos);
  }

  std::string without = "{\"crops\": [], \"months\": [], \"limits\": {}}";
  try {
    (void)parse_scenario_text(without);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("coefficients") != std::string::npos);
  }
}

TEST_CASE("negative inflow is reported at its path") {
  const Scenario s = bundled("representative");
  std::string text = scenario_to_text(s);
  // Fourth month: rewrite its inflow.
  const std::string needle = "\"inflow\": 306.7";
  text = replace_once(text, needle, "\"inflow\": -306.7");
  try {
    (void)parse_scenario_text(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.report().mentions("months[3].inflow"));
  }
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS((void)parse_scenario_text(replace_once(toy_text(), "\"crops\"", "\"extra\": 1, \"crops\"")),
                       doctest::Contains("extra: unknown key"), ParseError);
  CHECK_THROWS_WITH_AS((void)parse_scenario_text(replace_once(toy_text(), "\"rainfall\"", "\"rain\": 0, \"rainfall\"")),
                       doctest::Contains("months[0].rain: unknown key"), ParseError);
  CHECK_THROWS_WITH_AS(
      (void)parse_scenario_text(replace_once(toy_text(), "\"pump_cap_total\"", "\"pump\": 1, \"pump_cap_total\"")),
      doctest::Contains("limits.pump: unknown key"), ParseError);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "{\n  \"crops\": [\n    {\"name\": \"a\",, }\n  ]\n}\n";
  try {
    (void)parse_scenario_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 18);
  }
}

TEST_CASE("wrong value types and missing fields are parse errors") {
  CHECK_THROWS_WITH_AS((void)parse_scenario_text(replace_once(toy_text(), "\"inflow\": 100", "\"inflow\": \"lots\"")),
                       doctest::Contains("months[0].inflow: expected a number"), ParseError);
  CHECK_THROWS_WITH_AS((void)parse_scenario_text(replace_once(toy_text(), "\"inflow\": 100,", "")),
                       doctest::Contains("months[0]: missing field 'inflow'"), ParseError);
}

TEST_CASE("scenario text round-trips exactly") {
  for (const char* name : {"representative", "toy", "toy-two-month"}) {
    const Scenario s = bundled(name);
    CHECK(parse_scenario_text(scenario_to_text(s)) == s);
  }
  const auto dir = scratch_dir("io-roundtrip");
  ScenarioDraft d = irrigation::testing::small_draft(3, 5);
  d.months[2].rainfall = 0.1 + 0.2;  // not exactly representable in short decimal
  const Scenario odd = Scenario::create(d);
  save_scenario(odd, dir / "odd.json");
  CHECK(load_scenario(dir / "odd.json") == odd);
}

TEST_CASE("missing files are io errors") {
  CHECK_THROWS_AS((void)load_scenario("/nonexistent/nowhere.json"), IoError);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/file.csv", "x"), IoError);
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("front table layout") {
  const auto dir = scratch_dir("io-front");
  FrontResult fr;
  fr.points = {point(3.0, 30.0, std::nullopt, PointSource::endpoint), point(1.0, 10.0, std::nullopt, PointSource::endpoint),
               point(2.0, 20.0, 0.5, PointSource::subproblem1)};
  export_front(fr, dir / "f.csv", manifest());
  const std::string text = read_file(dir / "f.csv");
  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "net_benefit,efd,w1,source");
  CHECK(lines[1] == "1,10,,endpoint");
  CHECK(lines[2] == "2,20,0.5,subproblem1");
  CHECK(lines[3] == "3,30,,endpoint");

  const RunManifest m = parse_manifest(read_file(manifest_path_for(dir / "f.csv")));
  CHECK(m.output_sha256 == sha256_hex(text));
  CHECK(m.parameters.at("grid_points") == "3");

  CHECK_THROWS_AS(export_front(FrontResult{}, dir / "empty.csv", manifest()), std::invalid_argument);
}

TEST_CASE("numbers carry nine significant digits") {
  CHECK(format_number(1488763270.123) == "1.48876327e+09");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5) == "-2.5");
}

TEST_CASE("front tables reparse, and malformed rows name their line") {
  const auto rows = parse_front_csv("net_benefit,efd,w1,source\n1,2,,endpoint\n3,4,0.25,subproblem2\n5,6,,ga\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].objectives == ObjectivePair{3, 4});
  CHECK(rows[1].w1 == 0.25);
  CHECK(rows[1].line == 3);
  CHECK_FALSE(rows[0].w1.has_value());
  CHECK(rows[2].source == PointSource::evolutionary);

  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      (void)parse_front_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("wrong header\n") == 1);
  CHECK(line_of("net_benefit,efd,w1,source\n1,2,,endpoint\n1,x,,endpoint\n") == 3);
  CHECK(line_of("net_benefit,efd,w1,source\n1,2,endpoint\n") == 2);
  CHECK(line_of("net_benefit,efd,w1,source\n1,2,,mystery\n") == 2);
  CHECK(line_of("net_benefit,efd,w1,source\n1,inf,,endpoint\n") == 2);
  CHECK_THROWS_AS(parse_front_csv(""), ParseError);
}

TEST_CASE("large exported front reparses as a valid staircase") {
  const auto dir = scratch_dir("io-large");
  FrontOptions opt;
  opt.grid_points = 500;
  const FrontResult fr = run_front(bundled("representative"), opt);
  export_front(fr, dir / "front.csv", manifest());
  const auto rows = read_front(dir / "front.csv");
  CHECK(rows.size() == fr.points.size());
  std::vector<ObjectivePair> pts;
  for (const auto& r : rows) pts.push_back(r.objectives);
  CHECK(check_front(pts).ok());
}

TEST_CASE("repeated export is byte-identical") {
  const auto dir = scratch_dir("io-repeat");
  FrontOptions opt;
  opt.grid_points = 40;
  const Scenario s = bundled("toy-two-month");
  export_front(run_front(s, opt), dir / "a.csv", manifest());
  export_front(run_front(s, opt), dir / "b.csv", manifest());
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
}

TEST_CASE("plan tables") {
  const Scenario s = bundled("representative");
  SUBCASE("model 1 leaves the flow row at zero") {
    const BuiltModel m = build_model1(s, false);
    const auto plan = plan_from_solution(s, m.vars, solve_lp(m.lp).values);
    const auto lines = lines_of(format_plan(plan, s));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0].rfind("crops,Aus rice,", 0) == 0);
    CHECK(lines[1] == "X_c (ha),1000,1000,1000,1000,2076,1000,1000,5000,5000,5000");
    CHECK(lines[2].empty());
    CHECK(lines[3] == "months,Jan,Feb,Mar,Apr,May,Jun,Jul,Aug,Sep,Oct,Nov,Dec");
    CHECK(lines[4] == "Env.Flow (GL),0,0,0,0,0,0,0,0,0,0,0,0");
  }
  SUBCASE("target flag puts every flow at 100") {
    const BuiltModel m = build_model1(s, true);
    const auto plan = plan_from_solution(s, m.vars, solve_lp(m.lp).values);
    CHECK(lines_of(format_plan(plan, s))[4] == "Env.Flow (GL),100,100,100,100,100,100,100,100,100,100,100,100");
  }
  SUBCASE("zero plan") {
    const AllocationPlan zero{std::vector<double>(10, 0.0), std::vector<double>(12, 0.0)};
    const auto dir = scratch_dir("io-plan");
    export_plan(zero, s, dir / "plan.csv");
    const auto lines = lines_of(read_file(dir / "plan.csv"));
    CHECK(lines[1] == "X_c (ha),0,0,0,0,0,0,0,0,0,0");
    CHECK(lines[4] == "Env.Flow (GL),0,0,0,0,0,0,0,0,0,0,0,0");
  }
  SUBCASE("short horizons are labelled by index") {
    const Scenario two = bundled("toy-two-month");
    const AllocationPlan p{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(lines_of(format_plan(p, two))[3] == "months,M1,M2");
  }
}
