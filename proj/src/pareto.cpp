#include "irrigation/pareto.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "irrigation/parallel.hpp"

namespace irrigation {

const char* to_string(PointSource source) {
  switch (source) {
    case PointSource::subproblem1: return "subproblem1";
    case PointSource::subproblem2: return "subproblem2";
    case PointSource::endpoint: return "endpoint";
    case PointSource::evolutionary: return "ga";
  }
  return "?";
}

std::optional<PointSource> parse_point_source(std::string_view text) {
  for (auto s : {PointSource::subproblem1, PointSource::subproblem2, PointSource::endpoint,
                 PointSource::evolutionary}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

ModelStatusError::ModelStatusError(std::string model, LpStatus status)
    : std::runtime_error(model + " is " + to_string(status)), model_(std::move(model)), status_(status) {}

std::vector<WeightPair> generate_weights(std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid must have at least one point");
  std::vector<WeightPair> weights;
  weights.reserve(n);
  const double denom = static_cast<double>(n + 1);
  for (std::size_t i = 1; i <= n; ++i) weights.push_back(WeightPair::from_w1(static_cast<double>(i) / denom));
  return weights;
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.net_benefit >= b.net_benefit && a.efd <= b.efd && (a.net_benefit > b.net_benefit || a.efd < b.efd);
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePair> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].net_benefit != points[b].net_benefit) return points[a].net_benefit > points[b].net_benefit;
    return points[a].efd < points[b].efd;
  });
  std::vector<std::size_t> kept;
  double best_efd = kInfinity;
  for (std::size_t i : order) {
    if (points[i].efd < best_efd) {
      kept.push_back(i);
      best_efd = points[i].efd;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

std::vector<ObjectivePair> objectives_of(const std::vector<ParetoPoint>& points) {
  std::vector<ObjectivePair> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.objectives);
  return out;
}

std::vector<ParetoPoint> filter_nondominated(const std::vector<ParetoPoint>& points) {
  const auto objectives = objectives_of(points);
  std::vector<ParetoPoint> out;
  for (std::size_t i : nondominated_indices(objectives)) out.push_back(points[i]);
  return out;
}

namespace {

double sweep_area(std::span<const ObjectivePair> points, const ObjectivePair& reference) {
  double area = 0.0;
  double previous_nb = reference.net_benefit;
  for (std::size_t i : nondominated_indices(points)) {
    const auto& p = points[i];
    area += (p.net_benefit - previous_nb) * (reference.efd - p.efd);
    previous_nb = p.net_benefit;
  }
  return area;
}

}  // namespace

double hypervolume(std::span<const ObjectivePair> points, const ObjectivePair& reference) {
  for (const auto& p : points) {
    if (!(p.net_benefit >= reference.net_benefit && p.efd <= reference.efd)) {
      throw std::invalid_argument("reference point is not dominated by every point");
    }
  }
  return sweep_area(points, reference);
}

double dominated_area(std::span<const ObjectivePair> points, const ObjectivePair& reference) {
  std::vector<ObjectivePair> inside;
  for (const auto& p : points) {
    if (p.net_benefit >= reference.net_benefit && p.efd <= reference.efd) inside.push_back(p);
  }
  return sweep_area(inside, reference);
}

FrontCheck check_front(std::span<const ObjectivePair> points) {
  FrontCheck check;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i != j && dominates(points[i], points[j])) check.dominated.emplace_back(i, j);
    }
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].net_benefit > points[i - 1].net_benefit && points[i].efd > points[i - 1].efd)) {
      check.inversions.push_back(i);
    }
  }
  return check;
}

AllocationPlan plan_from_solution(const Scenario& scenario, const ModelVariables& vars,
                                  const std::vector<double>& values) {
  AllocationPlan plan = vars.extract_plan(values);
  for (double& x : plan.area_per_crop) x = std::max(x, 0.0);
  for (std::size_t m = 0; m < plan.env_flow_per_month.size(); ++m) {
    plan.env_flow_per_month[m] = std::clamp(plan.env_flow_per_month[m], 0.0, scenario.months()[m].inflow);
  }
  return plan;
}

namespace {

LpSolution solve_or_throw(const BuiltModel& model, const SolverOptions& solver, const char* name) {
  LpSolution solution = solve_lp(model.lp, solver);
  if (solution.status != LpStatus::optimal) throw ModelStatusError(name, solution.status);
  return solution;
}

ParetoPoint endpoint_from(const Scenario& scenario, const BuiltModel& model, const LpSolution& solution) {
  ParetoPoint point;
  point.plan = plan_from_solution(scenario, model.vars, solution.values);
  point.objectives = evaluate(scenario, point.plan);
  point.source = PointSource::endpoint;
  return point;
}

}  // namespace

Endpoints solve_endpoints(const Scenario& scenario, const SolverOptions& solver) {
  Endpoints ends;
  ends.model1_optimum = solve_or_throw(build_model1(scenario, false), solver, "model 1").objective_value;
  ends.model2_optimum = solve_or_throw(build_model2(scenario), solver, "model 2").objective_value;

  // Each endpoint is the lexicographic optimum so it cannot be dominated by
  // another plan sharing its primary objective.
  const double nb_slack = 1e-12 * std::abs(ends.model1_optimum);
  const BuiltModel best_benefit = build_min_efd_given_benefit(scenario, ends.model1_optimum - nb_slack);
  ends.max_benefit = endpoint_from(scenario, best_benefit, solve_or_throw(best_benefit, solver, "model 1 tie-break"));

  const double efd_slack = 1e-12 * std::max(1.0, scenario.total_target_env_flow());
  const BuiltModel best_flow = build_max_benefit_given_efd(scenario, ends.model2_optimum + efd_slack);
  ends.min_efd = endpoint_from(scenario, best_flow, solve_or_throw(best_flow, solver, "model 2 tie-break"));

  ends.shift = ObjectiveShift::from_ideal(scenario, ends.model1_optimum, ends.model2_optimum);
  return ends;
}

namespace {

struct WeightOutcome {
  std::optional<ParetoPoint> first;
  std::optional<ParetoPoint> second;
  std::size_t solved = 0;
  std::size_t failures = 0;
};

std::optional<ParetoPoint> solve_subproblem(const Scenario& scenario, WeightPair weight, Subproblem which,
                                            const ObjectiveShift& shift, const SolverOptions& solver,
                                            WeightOutcome& outcome) {
  const BuiltModel model = build_subproblem(scenario, weight, which, shift);
  LpSolution solution;
  try {
    solution = solve_lp(model.lp, solver);
  } catch (const SolverFault&) {
    ++outcome.failures;
    return std::nullopt;
  }
  if (solution.status != LpStatus::optimal) {
    ++outcome.failures;
    return std::nullopt;
  }
  ++outcome.solved;
  ParetoPoint point;
  point.plan = plan_from_solution(scenario, model.vars, solution.values);
  point.objectives = evaluate(scenario, point.plan);
  point.weight = weight;
  point.source = which == Subproblem::first ? PointSource::subproblem1 : PointSource::subproblem2;
  return point;
}

bool same_point(const ObjectiveShift& shift, const ObjectivePair& a, const ObjectivePair& b, double tol) {
  return std::abs(shift.g1(a.net_benefit) - shift.g1(b.net_benefit)) <= tol &&
         std::abs(shift.g2(a.efd) - shift.g2(b.efd)) <= tol;
}

}  // namespace

FrontResult run_front(const Scenario& scenario, const FrontOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const auto weights = generate_weights(options.grid_points);
  const Endpoints ends = solve_endpoints(scenario, options.solver);

  std::vector<WeightOutcome> outcomes(weights.size());
  parallel_for(weights.size(), options.threads, [&](std::size_t i) {
    auto& out = outcomes[i];
    out.first = solve_subproblem(scenario, weights[i], Subproblem::first, ends.shift, options.solver, out);
    out.second = solve_subproblem(scenario, weights[i], Subproblem::second, ends.shift, options.solver, out);
  });

  FrontResult result;
  result.stats.grid_points = weights.size();

  std::vector<ParetoPoint> candidates{ends.max_benefit, ends.min_efd};
  std::size_t total = candidates.size();
  for (auto& out : outcomes) {
    result.stats.subproblems_solved += out.solved;
    result.stats.solver_failures += out.failures;
    total += (out.first ? 1 : 0) + (out.second ? 1 : 0);
    if (out.first && out.second) {
      const auto& a = out.first->objectives;
      const auto& b = out.second->objectives;
      if (dominates(b, a)) {
        candidates.push_back(std::move(*out.second));
      } else if (dominates(a, b) || same_point(ends.shift, a, b, options.equality_tolerance)) {
        candidates.push_back(std::move(*out.first));
      } else {
        candidates.push_back(std::move(*out.first));
        candidates.push_back(std::move(*out.second));
      }
    } else if (out.first) {
      candidates.push_back(std::move(*out.first));
    } else if (out.second) {
      candidates.push_back(std::move(*out.second));
    }
  }

  std::vector<ParetoPoint> distinct;
  for (auto& c : candidates) {
    auto seen = std::find_if(distinct.begin(), distinct.end(), [&](const ParetoPoint& d) {
      return same_point(ends.shift, c.objectives, d.objectives, options.equality_tolerance);
    });
    if (seen == distinct.end()) {
      distinct.push_back(std::move(c));
    } else if (dominates(c.objectives, seen->objectives)) {
      *seen = std::move(c);
    }
  }

  result.points = filter_nondominated(distinct);
  result.stats.discarded_count = total - result.points.size();
  result.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace irrigation
