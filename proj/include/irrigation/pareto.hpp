#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irrigation/evaluation.hpp"
#include "irrigation/lp.hpp"
#include "irrigation/models.hpp"
#include "irrigation/scenario.hpp"

namespace irrigation {

enum class PointSource { subproblem1, subproblem2, endpoint, evolutionary };

const char* to_string(PointSource source);
std::optional<PointSource> parse_point_source(std::string_view text);

struct ParetoPoint {
  ObjectivePair objectives;
  AllocationPlan plan;
  std::optional<WeightPair> weight;
  PointSource source = PointSource::endpoint;
};

struct FrontStats {
  std::size_t grid_points = 0;
  std::size_t subproblems_solved = 0;
  double wall_time_seconds = 0.0;
  std::size_t discarded_count = 0;
  std::size_t solver_failures = 0;
};

/// Points are mutually nondominated and sorted by net benefit ascending.
struct FrontResult {
  std::vector<ParetoPoint> points;
  FrontStats stats;
};

/// A model that must have an optimum (an endpoint) ended infeasible or
/// unbounded.
class ModelStatusError : public std::runtime_error {
 public:
  ModelStatusError(std::string model, LpStatus status);
  const std::string& model() const { return model_; }
  LpStatus status() const { return status_; }

 private:
  std::string model_;
  LpStatus status_;
};

/// n pairs with w1 = i/(n+1), i = 1..n. Throws std::invalid_argument for n = 0.
std::vector<WeightPair> generate_weights(std::size_t n);

/// Net benefit is maximized and EFD minimized.
bool dominates(const ObjectivePair& a, const ObjectivePair& b);

/// Indices of the nondominated points, ordered by net benefit ascending.
/// Exact duplicates keep only their first occurrence.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePair> points);

std::vector<ParetoPoint> filter_nondominated(const std::vector<ParetoPoint>& points);

/// Area dominated by the points and bounded by the reference. Throws
/// std::invalid_argument if some point does not weakly dominate the reference.
double hypervolume(std::span<const ObjectivePair> points, const ObjectivePair& reference);

/// As hypervolume, but points that do not dominate the reference contribute
/// nothing instead of throwing.
double dominated_area(std::span<const ObjectivePair> points, const ObjectivePair& reference);

struct FrontCheck {
  /// (i, j): row i dominates row j.
  std::vector<std::pair<std::size_t, std::size_t>> dominated;
  /// Row i is out of staircase order relative to row i - 1.
  std::vector<std::size_t> inversions;

  bool ok() const { return dominated.empty() && inversions.empty(); }
};

/// Exhaustive pairwise dominance check plus the staircase check on the given
/// order: net benefit strictly increasing and EFD strictly increasing.
FrontCheck check_front(std::span<const ObjectivePair> points);

std::vector<ObjectivePair> objectives_of(const std::vector<ParetoPoint>& points);

struct Endpoints {
  double model1_optimum = 0.0;  // NB*
  double model2_optimum = 0.0;  // EFD*
  ParetoPoint max_benefit;      // NB*, least EFD among such plans
  ParetoPoint min_efd;          // EFD*, greatest NB among such plans
  ObjectiveShift shift;
};

/// Throws ModelStatusError if either model has no optimum.
Endpoints solve_endpoints(const Scenario& scenario, const SolverOptions& solver = {});

/// LP values to a plan, with roundoff pulled back into [0, inflow].
AllocationPlan plan_from_solution(const Scenario& scenario, const ModelVariables& vars,
                                  const std::vector<double>& values);

struct FrontOptions {
  std::size_t grid_points = 500;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 0;
  SolverOptions solver;
  /// Two objective pairs closer than this in normalized (g1, g2) space are
  /// the same point.
  double equality_tolerance = 1e-6;
};

FrontResult run_front(const Scenario& scenario, const FrontOptions& options = {});

}  // namespace irrigation
