#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "irrigation/evaluation.hpp"
#include "irrigation/pareto.hpp"
#include "irrigation/scenario.hpp"

namespace irrigation {

struct GaConfig {
  std::size_t population_size = 100;
  std::size_t generations = 200;
  double crossover_rate = 0.9;
  /// Per-gene probability of polynomial mutation.
  double mutation_rate = 0.2;
  /// Mutation step as a fraction of each gene's range.
  double mutation_scale = 0.1;
  std::uint64_t seed = 1;
  /// Workers for objective evaluation; 0 means one per hardware thread.
  std::size_t threads = 1;

  /// Throws std::invalid_argument unless population_size >= 4 and even and
  /// the rates and scale lie in [0, 1].
  void validate() const;
};

struct Individual {
  AllocationPlan plan;
  ObjectivePair objectives;
  bool feasible = false;
  double constraint_violation = 0.0;
};

Individual make_individual(const Scenario& scenario, AllocationPlan plan);

/// Feasibility-first dominance: a feasible individual beats an infeasible
/// one, lower violation wins among infeasible ones, objective dominance
/// decides among feasible ones.
bool constrained_dominates(const Individual& a, const Individual& b);

/// Fronts of indices; fronts[0] is rank 1.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Individual>& population);

class GaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaResult {
  /// Feasible nondominated members of the final population. stats.grid_points
  /// holds the population size and stats.subproblems_solved the number of
  /// objective evaluations.
  FrontResult front;
  /// Area dominated by the feasible rank-1 set after each generation (index 0
  /// is the initial population), measured from objective_floor(scenario).
  std::vector<double> hypervolume_history;
};

/// Throws GaError if the final population holds no feasible individual.
GaResult run_ga(const Scenario& scenario, const GaConfig& config);

}  // namespace irrigation
