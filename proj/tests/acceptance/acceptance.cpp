// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "irrigation/cli.hpp"
#include "irrigation/io.hpp"
#include "irrigation/models.hpp"
#include "irrigation/nsga2.hpp"
#include "irrigation/pareto.hpp"
#include "vertex_oracle.hpp"

using namespace irrigation;
using irrigation::testing::bundled;
using irrigation::testing::data_file;
using irrigation::testing::scratch_dir;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int failures = 0;

void criterion(const char* id, const char* title, double budget_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_seconds) v.require(false, "took " + num(elapsed) + " s, budget " + num(budget_seconds) + " s");
  if (!v.pass) ++failures;
  std::printf("%s %s: %s (%.3f s)%s%s\n", v.pass ? "PASS" : "FAIL", id, title, elapsed, v.detail.empty() ? "" : " - ",
              v.detail.c_str());
  std::fflush(stdout);
}

FrontResult front(const Scenario& s, std::size_t n) {
  FrontOptions opt;
  opt.grid_points = n;
  return run_front(s, opt);
}

double max_efd(const FrontResult& f) {
  double m = -kInfinity;
  for (const auto& p : f.points) m = std::max(m, p.objectives.efd);
  return m;
}

double min_efd(const FrontResult& f) {
  double m = kInfinity;
  for (const auto& p : f.points) m = std::min(m, p.objectives.efd);
  return m;
}

double max_nb(const FrontResult& f) {
  double m = -kInfinity;
  for (const auto& p : f.points) m = std::max(m, p.objectives.net_benefit);
  return m;
}

int run_cli(std::vector<std::string> args, std::string* err = nullptr) {
  std::ostringstream out;
  std::ostringstream e;
  const int code = cli::run(args, out, e);
  if (err) *err = e.str();
  return code;
}

// Manifest text with the timestamps object removed.
std::string manifest_without_timestamps(const std::filesystem::path& output) {
  RunManifest m = parse_manifest(read_file(manifest_path_for(output)));
  m.started_at.clear();
  m.finished_at.clear();
  m.wall_time_seconds = 0.0;
  return manifest_to_text(m);
}

Verdict ac1() {
  Verdict v;
  const Scenario s = bundled("representative");
  const AllocationPlan plan{{1000, 1000, 1000, 1000, 2076, 1000, 1000, 5000, 5000, 5000}, std::vector<double>(12, 0.0)};
  const double value = efd(s, plan);
  v.require(value == 1200.0, "efd = " + num(value));
  for (const auto& m : s.months()) v.require(m.target_env_flow == 100.0, "target is not 100 GL");
  v.detail = v.pass ? "efd = 1200 GL" : v.detail;
  return v;
}

Verdict ac2() {
  Verdict v;
  const Scenario s = bundled("representative");
  const BuiltModel free_model = build_model1(s, false);
  const BuiltModel flagged = build_model1(s, true);
  const auto free_r = solve_lp(free_model.lp);
  const auto flag_r = solve_lp(flagged.lp);
  v.require(free_r.status == LpStatus::optimal && flag_r.status == LpStatus::optimal, "model 1 not optimal");
  if (!v.pass) return v;
  const auto plan = plan_from_solution(s, flagged.vars, flag_r.values);
  double worst = 0.0;
  for (std::size_t m = 0; m < s.month_count(); ++m) {
    worst = std::max(worst, std::abs(plan.env_flow_per_month[m] - s.months()[m].target_env_flow));
  }
  const double deficiency = efd(s, plan);
  v.require(worst <= 1e-9, "flow differs from target by " + num(worst));
  v.require(deficiency <= 1e-9, "efd = " + num(deficiency));
  v.require(flag_r.objective_value < free_r.objective_value, "objective did not drop");
  if (v.pass) {
    v.detail = "NB " + num(free_r.objective_value) + " -> " + num(flag_r.objective_value) + ", efd " + num(deficiency);
  }
  return v;
}

Verdict ac3() {
  Verdict v;
  std::string summary;
  for (const char* name : {"toy", "toy-two-month", "representative"}) {
    const Scenario s = bundled(name);
    const double nb_star = solve_lp(build_model1(s, false).lp).objective_value;
    const double efd_star = solve_lp(build_model2(s).lp).objective_value;
    const FrontResult f = front(s, 500);
    const double nb_gap = std::abs(max_nb(f) - nb_star) / std::max(1.0, std::abs(nb_star));
    const double efd_gap = std::abs(min_efd(f) - efd_star);
    v.require(nb_gap <= 1e-6, std::string(name) + " NB relative gap " + num(nb_gap));
    v.require(efd_gap <= 1e-6, std::string(name) + " EFD gap " + num(efd_gap));
    summary += std::string(summary.empty() ? "" : ", ") + name + " NB gap " + num(nb_gap) + " EFD gap " + num(efd_gap);
  }
  if (v.pass) v.detail = summary;
  return v;
}

Verdict ac4() {
  Verdict v;
  const FrontResult f = front(bundled("representative"), 500);
  const double lo = min_efd(f);
  const double hi = max_efd(f);
  v.require(lo <= 1e-6, "least EFD " + num(lo));
  v.require(hi >= 1200.0 - 1e-6, "largest EFD " + num(hi));
  if (v.pass) v.detail = "EFD spans " + num(lo) + " .. " + num(hi) + " GL over " + std::to_string(f.points.size()) + " points";
  return v;
}

Verdict ac5() {
  Verdict v;
  std::mt19937_64 rng(20240501);
  int disagreements = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LinearProgram lp = irrigation::testing::random_bounded_lp(rng);
    const auto r = solve_lp(lp);
    const auto o = irrigation::testing::brute_force_vertex_oracle(lp);
    if (r.status != LpStatus::optimal || o.status != LpStatus::optimal) {
      ++disagreements;
      continue;
    }
    const double gap = std::abs(r.objective_value - o.objective_value);
    worst = std::max(worst, gap);
    if (gap > 1e-8) ++disagreements;
  }
  v.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  v.detail += (v.detail.empty() ? "" : "; ") + std::string("100 LPs, worst gap ") + num(worst);
  return v;
}

Verdict ac6() {
  Verdict v;
  const Scenario s = bundled("toy");
  const auto& lim = s.limits();
  const int grid = 100;
  const double x_hi = lim.area_upper_per_crop;
  const double e_hi = std::min(lim.env_flow_upper_per_month, s.months()[0].inflow);

  // Brute-force enumeration of a 100 x 100 grid over the decision box.
  std::vector<ObjectivePair> feasible;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const AllocationPlan p{{x_hi * i / (grid - 1)}, {e_hi * j / (grid - 1)}};
      if (constraint_violation(s, p) <= 1e-12) feasible.push_back(evaluate(s, p));
    }
  }
  std::vector<ObjectivePair> truth;
  for (std::size_t k : nondominated_indices(feasible)) truth.push_back(feasible[k]);

  const FrontResult f = front(s, 500);
  const auto approx = objectives_of(f.points);

  double nb_lo = kInfinity, nb_hi = -kInfinity, e_lo = kInfinity, e_hi_obj = -kInfinity;
  for (const auto& p : truth) {
    nb_lo = std::min(nb_lo, p.net_benefit);
    nb_hi = std::max(nb_hi, p.net_benefit);
    e_lo = std::min(e_lo, p.efd);
    e_hi_obj = std::max(e_hi_obj, p.efd);
  }
  auto dist = [&](const ObjectivePair& a, const ObjectivePair& b) {
    return std::hypot((a.net_benefit - b.net_benefit) / (nb_hi - nb_lo), (a.efd - b.efd) / (e_hi_obj - e_lo));
  };
  auto directed = [&](const std::vector<ObjectivePair>& from, const std::vector<ObjectivePair>& to) {
    double worst = 0.0;
    for (const auto& a : from) {
      double best = kInfinity;
      for (const auto& b : to) best = std::min(best, dist(a, b));
      worst = std::max(worst, best);
    }
    return worst;
  };
  const double hausdorff = std::max(directed(truth, approx), directed(approx, truth));
  const double spacing = 1.0 / (grid - 1);
  v.require(truth.size() >= 2, "enumeration found no front");
  v.require(hausdorff <= spacing, "Hausdorff " + num(hausdorff) + " > spacing " + num(spacing));
  if (v.pass) {
    v.detail = std::to_string(grid * grid) + " grid plans, " + std::to_string(truth.size()) + " on the true front, Hausdorff " +
               num(hausdorff) + " <= spacing " + num(spacing);
  }
  return v;
}

Verdict ac7() {
  Verdict v;
  const auto dir = scratch_dir("acceptance-ac7");
  const FrontResult big = front(bundled("representative"), 998);
  RunManifest m;
  m.method = "weighted-constraint";
  export_front(big, dir / "front.csv", m);
  const std::size_t rows = read_front(dir / "front.csv").size();
  v.require(rows >= 1000, "only " + std::to_string(rows) + " rows");

  GaConfig cfg;
  cfg.seed = 7;
  export_front(run_ga(bundled("representative"), cfg).front, dir / "ga.csv", m);

  const auto start = std::chrono::steady_clock::now();
  for (const char* file : {"front.csv", "ga.csv"}) {
    std::vector<ObjectivePair> pts;
    for (const auto& r : read_front(dir / file)) pts.push_back(r.objectives);
    const FrontCheck c = check_front(pts);
    v.require(c.ok(), std::string(file) + ": " + std::to_string(c.dominated.size()) + " dominated pairs, " +
                          std::to_string(c.inversions.size()) + " staircase breaks");
    std::string err;
    v.require(run_cli({"report", (dir / file).string()}, &err) == 0, std::string("report failed: ") + err);
  }
  const double verify = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(verify < 5.0, "verification took " + num(verify) + " s");

  // The verifier must also catch a planted dominated row.
  std::string text = read_file(dir / "front.csv");
  text += "0,1200,,endpoint\n";
  write_file(dir / "bad.csv", text);
  v.require(run_cli({"report", (dir / "bad.csv").string()}) == cli::kReportFailed, "planted row not reported");
  if (v.pass) v.detail = std::to_string(rows) + "-row front and GA front verified from files in " + num(verify) + " s";
  return v;
}

Verdict ac8() {
  Verdict v;
  const FrontResult f = front(bundled("representative"), 500);
  v.require(f.stats.subproblems_solved == 1000, std::to_string(f.stats.subproblems_solved) + " subproblems solved");
  v.require(f.stats.solver_failures == 0, std::to_string(f.stats.solver_failures) + " solver failures");
  v.require(f.stats.wall_time_seconds < 60.0, "wall time " + num(f.stats.wall_time_seconds));
  v.detail += (v.detail.empty() ? "" : "; ") + std::to_string(f.stats.subproblems_solved) + " subproblems in " +
              num(f.stats.wall_time_seconds) + " s, front size " + std::to_string(f.points.size()) + ", discarded " +
              std::to_string(f.stats.discarded_count);
  return v;
}

Verdict ac9() {
  Verdict v;
  const Scenario s = bundled("toy");
  const auto exact = objectives_of(front(s, 500).points);
  GaConfig cfg;
  cfg.population_size = 100;
  cfg.generations = 200;
  cfg.seed = 1;
  const auto ga = objectives_of(run_ga(s, cfg).front.points);

  double nb_lo = kInfinity, nb_hi = -kInfinity, e_lo = kInfinity, e_hi = -kInfinity;
  for (const auto& p : exact) {
    nb_lo = std::min(nb_lo, p.net_benefit);
    nb_hi = std::max(nb_hi, p.net_benefit);
    e_lo = std::min(e_lo, p.efd);
    e_hi = std::max(e_hi, p.efd);
  }
  const ObjectivePair reference{nb_lo - 0.1 * (nb_hi - nb_lo), e_hi + 0.1 * (e_hi - e_lo)};
  const double hv_exact = hypervolume(exact, reference);
  const double hv_ga = dominated_area(ga, reference);
  const double ratio = hv_ga / hv_exact;
  v.require(ratio >= 0.95, "hypervolume ratio " + num(ratio));

  const double tol_nb = 1e-3 * (nb_hi - nb_lo);
  const double tol_e = 1e-3 * (e_hi - e_lo);
  std::size_t beaten = 0;
  for (const auto& g : ga) {
    for (const auto& p : exact) {
      if (dominates(g, {p.net_benefit + tol_nb, p.efd - tol_e})) ++beaten;
    }
  }
  v.require(beaten == 0, std::to_string(beaten) + " exact points dominated beyond tolerance");
  v.detail += (v.detail.empty() ? "" : "; ") + std::string("GA/exact hypervolume ") + num(ratio) + " with " +
              std::to_string(ga.size()) + " GA points";
  return v;
}

Verdict ac10() {
  Verdict v;
  const auto dir = scratch_dir("acceptance-ac10");
  const std::string rep = data_file("representative").string();
  const std::vector<std::vector<std::string>> commands{
      {"front", rep, "--grid-points", "200", "--out"},
      {"baseline", rep, "--seed", "11", "--out"},
      {"solve-nb", rep, "--out"},
      {"solve-nb", rep, "--with-target-flow", "--out"},
      {"solve-efd", rep, "--out"},
  };
  std::size_t compared = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::filesystem::path> outputs;
    for (int run = 0; run < 2; ++run) {
      auto args = commands[c];
      const auto out = dir / ("c" + std::to_string(c) + "-r" + std::to_string(run) + ".csv");
      args.push_back(out.string());
      if (run == 1) args.insert(args.begin(), {"--threads", "3"});
      v.require(run_cli(args) == 0, "command " + std::to_string(c) + " failed");
      outputs.push_back(out);
    }
    v.require(read_file(outputs[0]) == read_file(outputs[1]), "command " + std::to_string(c) + " output differs");
    if (std::filesystem::exists(manifest_path_for(outputs[0]))) {
      v.require(manifest_without_timestamps(outputs[0]) == manifest_without_timestamps(outputs[1]),
                "command " + std::to_string(c) + " manifest differs beyond timestamps");
    }
    ++compared;
  }
  if (v.pass) v.detail = std::to_string(compared) + " commands rerun, result files byte-identical";
  return v;
}

}  // namespace

int main() {
  criterion("AC1", "EFD ceiling with zero flows", 1.0, ac1);
  criterion("AC2", "target constraint collapses EFD to zero", 1.0, ac2);
  criterion("AC3", "front extremes match single-objective optima", 60.0, ac3);
  criterion("AC4", "front spans EFD 0 to 1200 GL", 60.0, ac4);
  criterion("AC5", "simplex agrees with vertex enumeration", 10.0, ac5);
  criterion("AC6", "toy front within grid spacing of enumerated truth", 30.0, ac6);
  criterion("AC7", "exported fronts are nondominated staircases", 60.0, ac7);
  criterion("AC8", "500 weights, 1000 subproblems under 60 s", 60.0, ac8);
  criterion("AC9", "GA baseline quality on the toy front", 60.0, ac9);
  criterion("AC10", "reruns are byte-identical", 120.0, ac10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
