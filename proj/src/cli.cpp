#include "irrigation/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "irrigation/io.hpp"
#include "irrigation/models.hpp"
#include "irrigation/nsga2.hpp"
#include "irrigation/pareto.hpp"

namespace irrigation::cli {

namespace {

namespace fs = std::filesystem;

struct Failure {
  ExitCode code;
  const char* kind;
  std::string detail;
};

struct Globals {
  double tolerance = 1e-9;
  std::size_t threads = 0;
  bool verbose = false;
  bool quiet = false;
  std::string dump_lp;
};

struct Options {
  Globals globals;
  std::string scenario;
  bool with_target_flow = false;
  std::string out;
  std::size_t grid_points = 500;
  std::size_t population = 100;
  std::size_t generations = 200;
  std::uint64_t seed = 1;
  std::string front_file;
  std::string report_scenario;
};

// Bundled names ("representative", "toy") resolve into the data directory
// when no such file exists.
fs::path resolve_scenario(const std::string& arg) {
  const fs::path given(arg);
  if (fs::exists(given) || given.has_parent_path() || given.has_extension()) return given;
  const fs::path bundled = fs::path(IRRIGATION_DATA_DIR) / (arg + ".json");
  return fs::exists(bundled) ? bundled : given;
}

SolverOptions solver_options(const Globals& g) {
  SolverOptions s;
  s.tolerance = g.tolerance;
  return s;
}

std::string objectives_line(const ObjectivePair& o) {
  return "net_benefit=" + format_number(o.net_benefit) + " efd=" + format_number(o.efd);
}

RunManifest base_manifest(const fs::path& scenario, const std::string& method, const Globals& g) {
  RunManifest m;
  m.scenario_path = scenario.string();
  m.scenario_sha256 = sha256_file(scenario);
  m.method = method;
  m.tool_version = IRRIGATION_VERSION;
  m.parameters["tolerance"] = format_number(g.tolerance);
  m.started_at = utc_timestamp();
  return m;
}

int solve_single(const Options& o, bool efd_model, std::ostream& out) {
  const fs::path path = resolve_scenario(o.scenario);
  const Scenario s = load_scenario(path);
  const BuiltModel model = efd_model ? build_model2(s) : build_model1(s, o.with_target_flow);
  if (!o.globals.dump_lp.empty()) write_file(o.globals.dump_lp, dump_tableau(model.lp));
  const LpSolution solution = solve_lp(model.lp, solver_options(o.globals));
  if (solution.status != LpStatus::optimal) {
    throw ModelStatusError(efd_model ? "model 2" : "model 1", solution.status);
  }
  const AllocationPlan plan = plan_from_solution(s, model.vars, solution.values);
  const ObjectivePair objectives = evaluate(s, plan);
  if (!o.globals.quiet) {
    out << (efd_model ? "model 2" : "model 1") << ": objective=" << format_number(solution.objective_value) << ' '
        << objectives_line(objectives) << '\n';
    if (o.globals.verbose) out << "iterations=" << solution.iterations << '\n';
  }
  if (!o.out.empty()) {
    export_plan(plan, s, o.out);
  } else if (!o.globals.quiet) {
    out << format_plan(plan, s);
  }
  return kOk;
}

int front_command(const Options& o, std::ostream& out) {
  const fs::path path = resolve_scenario(o.scenario);
  const Scenario s = load_scenario(path);
  RunManifest manifest = base_manifest(path, "weighted-constraint", o.globals);
  manifest.parameters["grid_points"] = std::to_string(o.grid_points);

  FrontOptions options;
  options.grid_points = o.grid_points;
  options.threads = o.globals.threads;
  options.solver = solver_options(o.globals);
  const FrontResult front = run_front(s, options);

  manifest.finished_at = utc_timestamp();
  manifest.wall_time_seconds = front.stats.wall_time_seconds;
  export_front(front, o.out, manifest);
  if (!o.globals.quiet) {
    out << "points=" << front.points.size() << " subproblems=" << front.stats.subproblems_solved
        << " wall_time=" << format_number(front.stats.wall_time_seconds) << "s\n";
    if (o.globals.verbose) {
      out << "grid_points=" << front.stats.grid_points << " discarded=" << front.stats.discarded_count
          << " solver_failures=" << front.stats.solver_failures << '\n';
    }
  }
  return kOk;
}

int baseline_command(const Options& o, std::ostream& out) {
  const fs::path path = resolve_scenario(o.scenario);
  const Scenario s = load_scenario(path);
  RunManifest manifest = base_manifest(path, "nsga2", o.globals);
  GaConfig config;
  config.population_size = o.population;
  config.generations = o.generations;
  config.seed = o.seed;
  config.threads = o.globals.threads;
  manifest.parameters["population"] = std::to_string(o.population);
  manifest.parameters["generations"] = std::to_string(o.generations);
  manifest.parameters["seed"] = std::to_string(o.seed);
  manifest.parameters["crossover_rate"] = format_number(config.crossover_rate);
  manifest.parameters["mutation_rate"] = format_number(config.mutation_rate);
  manifest.parameters["mutation_scale"] = format_number(config.mutation_scale);

  const GaResult result = run_ga(s, config);
  manifest.finished_at = utc_timestamp();
  manifest.wall_time_seconds = result.front.stats.wall_time_seconds;
  export_front(result.front, o.out, manifest);
  if (!o.globals.quiet) {
    out << "points=" << result.front.points.size() << " evaluations=" << result.front.stats.subproblems_solved
        << " wall_time=" << format_number(result.front.stats.wall_time_seconds) << "s\n";
    if (o.globals.verbose) out << "hypervolume=" << format_number(result.hypervolume_history.back()) << '\n';
  }
  return kOk;
}

int report_command(const Options& o, std::ostream& out) {
  const fs::path path(o.front_file);
  const std::string text = read_file(path);
  const auto rows = parse_front_csv(text);
  std::vector<ObjectivePair> points;
  for (const auto& r : rows) points.push_back(r.objectives);

  std::vector<std::string> problems;
  const FrontCheck check = check_front(points);
  for (const auto& [i, j] : check.dominated) {
    problems.push_back("line " + std::to_string(rows[j].line) + " is dominated by line " + std::to_string(rows[i].line));
  }
  for (std::size_t i : check.inversions) {
    problems.push_back("line " + std::to_string(rows[i].line) + " breaks the staircase after line " +
                       std::to_string(rows[i - 1].line));
  }

  if (const fs::path manifest_path = manifest_path_for(path); fs::exists(manifest_path)) {
    const RunManifest manifest = parse_manifest(read_file(manifest_path));
    if (manifest.output_sha256 != sha256_hex(text)) problems.push_back("digest does not match " + manifest_path.string());
  }

  if (!o.report_scenario.empty()) {
    const Scenario s = load_scenario(resolve_scenario(o.report_scenario));
    const Endpoints ends = solve_endpoints(s, solver_options(o.globals));
    const double nb_tol = 1e-6 * std::max(1.0, std::abs(ends.model1_optimum));
    const double efd_tol = 1e-6;
    for (const auto& r : rows) {
      if (r.objectives.net_benefit > ends.model1_optimum + nb_tol) {
        problems.push_back("line " + std::to_string(r.line) + " exceeds the best net benefit " +
                           format_number(ends.model1_optimum));
      }
      if (r.objectives.efd < ends.model2_optimum - efd_tol) {
        problems.push_back("line " + std::to_string(r.line) + " is below the least EFD " +
                           format_number(ends.model2_optimum));
      }
    }
    const bool has_endpoints = std::any_of(rows.begin(), rows.end(), [](const FrontRow& r) {
      return r.source == PointSource::endpoint;
    });
    if (has_endpoints && !rows.empty()) {
      const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const FrontRow& a, const FrontRow& b) {
        return a.objectives.net_benefit < b.objectives.net_benefit;
      });
      if (std::abs(hi->objectives.net_benefit - ends.model1_optimum) > nb_tol) {
        problems.push_back("largest net benefit " + format_number(hi->objectives.net_benefit) + " differs from " +
                           format_number(ends.model1_optimum));
      }
      if (std::abs(lo->objectives.efd - ends.model2_optimum) > efd_tol) {
        problems.push_back("least EFD " + format_number(lo->objectives.efd) + " differs from " +
                           format_number(ends.model2_optimum));
      }
    }
  }

  if (!problems.empty()) {
    std::string detail = std::to_string(problems.size()) + " problem(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) detail += (i ? "; " : "") + problems[i];
    throw Failure{kReportFailed, "report", detail};
  }
  if (!o.globals.quiet) {
    out << "ok: " << rows.size() << " points, nondominated, staircase order";
    if (!o.report_scenario.empty()) out << ", consistent with model optima";
    out << '\n';
  }
  return kOk;
}

int validate_command(const Options& o, std::ostream& out) {
  const fs::path path = resolve_scenario(o.scenario);
  const Scenario s = parse_scenario_text(read_file(path));
  if (!o.globals.quiet) out << "ok: " << s.crop_count() << " crops, " << s.month_count() << " months\n";
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Irrigation planning: net benefit versus environmental flow deficiency", "irrigate"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  auto* verbose = app.add_flag("--verbose,-v", o.globals.verbose, "Print run statistics");
  auto* quiet = app.add_flag("--quiet,-q", o.globals.quiet, "Print nothing on success");
  verbose->excludes(quiet);
  app.add_option("--tolerance", o.globals.tolerance, "Simplex feasibility tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", o.globals.threads, "Worker threads, 0 for all hardware threads")
      ->capture_default_str();
  app.add_option("--dump-lp", o.globals.dump_lp, "Write the LP tableau (solve-nb, solve-efd)");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", o.scenario, "Scenario file or bundled name")->required();

  auto* solve_nb = app.add_subcommand("solve-nb", "Maximize net benefit");
  solve_nb->add_option("scenario", o.scenario, "Scenario file or bundled name")->required();
  solve_nb->add_flag("--with-target-flow", o.with_target_flow, "Require monthly flows to meet targets");
  solve_nb->add_option("--out", o.out, "Plan table output");

  auto* solve_efd = app.add_subcommand("solve-efd", "Minimize environmental flow deficiency");
  solve_efd->add_option("scenario", o.scenario, "Scenario file or bundled name")->required();
  solve_efd->add_option("--out", o.out, "Plan table output");

  auto* front = app.add_subcommand("front", "Trace the Pareto front by weighted-constraint subproblems");
  front->add_option("scenario", o.scenario, "Scenario file or bundled name")->required();
  front->add_option("--grid-points", o.grid_points, "Number of weights")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  front->add_option("--out", o.out, "Front table output")->required();

  auto* baseline = app.add_subcommand("baseline", "Approximate the front with NSGA-II");
  baseline->add_option("scenario", o.scenario, "Scenario file or bundled name")->required();
  baseline->add_option("--pop", o.population, "Population size")->capture_default_str();
  baseline->add_option("--gens", o.generations, "Generations")->capture_default_str();
  baseline->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  baseline->add_option("--out", o.out, "Front table output")->required();

  auto* report = app.add_subcommand("report", "Verify a front table");
  report->add_option("front-file", o.front_file, "Front table")->required();
  report->add_option("--scenario", o.report_scenario, "Check endpoints against this scenario");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error:usage: " << e.what() << '\n';
    return kUsage;
  }

  const bool solve_command = solve_nb->parsed() || solve_efd->parsed();
  if (!o.globals.dump_lp.empty() && !solve_command) {
    err << "error:usage: --dump-lp is only valid with solve-nb and solve-efd\n";
    return kUsage;
  }

  if (validate->parsed()) return validate_command(o, out);
  if (solve_nb->parsed()) return solve_single(o, false, out);
  if (solve_efd->parsed()) return solve_single(o, true, out);
  if (front->parsed()) return front_command(o, out);
  if (baseline->parsed()) return baseline_command(o, out);
  return report_command(o, out);
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&](ExitCode code, const char* kind, const std::string& detail) {
    err << "error:" << kind << ": " << one_line(detail) << '\n';
    return static_cast<int>(code);
  };
  try {
    return dispatch(args, out, err);
  } catch (const Failure& f) {
    return fail(f.code, f.kind, f.detail);
  } catch (const IoError& e) {
    return fail(kIo, "io", e.what());
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const ValidationError& e) {
    std::string detail;
    for (const auto& issue : e.report().issues) {
      detail += (detail.empty() ? "" : "; ") + issue.path + ": " + issue.message;
    }
    return fail(kValidation, "validation", detail);
  } catch (const ModelStatusError& e) {
    return fail(kModel, "model", e.what());
  } catch (const GaError& e) {
    return fail(kModel, "model", e.what());
  } catch (const SolverFault& e) {
    return fail(kSolverFault, "solver", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace irrigation::cli
