#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "irrigation/kernels.hpp"

namespace irrigation {

enum class Sense { minimize, maximize };
enum class Relation { less_equal, greater_equal, equal };

const char* to_string(Relation relation);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
  std::string name;
};

/// Dense linear program with bounded variables:
///
///   optimize  c'x + offset
///   s.t.      a_i'x (<=|>=|=) b_i
///             lower <= x <= upper   (lower finite, upper may be +inf)
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::minimize) : sense_(sense) {}

  /// Appends a variable; existing constraint rows are padded with 0.
  std::size_t add_variable(std::string name, double lower = 0.0, double upper = kInfinity, double cost = 0.0);

  /// Sparse row helper; indices must be < variable_count().
  void add_constraint(const std::vector<std::pair<std::size_t, double>>& terms, Relation relation, double rhs,
                      std::string name = {});
  void add_dense_constraint(std::vector<double> coeffs, Relation relation, double rhs, std::string name = {});

  void set_cost(std::size_t var, double cost) { costs_.at(var) = cost; }
  void set_bounds(std::size_t var, double lower, double upper);
  void set_sense(Sense sense) { sense_ = sense; }
  void set_objective_offset(double offset) { offset_ = offset; }

  Sense sense() const { return sense_; }
  double objective_offset() const { return offset_; }
  std::size_t variable_count() const { return costs_.size(); }
  std::size_t constraint_count() const { return constraints_.size(); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LpConstraint>& constraints() const { return constraints_; }

  /// Throws std::invalid_argument naming the first broken invariant.
  void check() const;

  double objective_at(const std::vector<double>& x) const;
  /// Largest absolute violation of any row or bound at x.
  double max_violation(const std::vector<double>& x) const;

 private:
  Sense sense_;
  double offset_ = 0.0;
  std::vector<double> costs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<LpConstraint> constraints_;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

struct SolverOptions {
  /// Primal feasibility / optimality tolerance on the scaled problem.
  double tolerance = 1e-9;
  /// Kernel table; nullptr selects kernels::best().
  const kernels::KernelTable* kernels = nullptr;
  /// Dantzig pivots allowed per phase before switching to Bland's rule;
  /// 0 picks 10 * (variables + constraints).
  std::size_t dantzig_pivot_limit = 0;
};

/// Iteration cap exceeded or the final point failed its feasibility check.
class SolverFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-phase primal simplex on a dense, row/column-scaled tableau.
/// Infeasible and unbounded problems are statuses, not faults. Identical
/// input and kernel table give bit-identical output.
LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/// Human-readable tableau listing of the problem (debug output).
std::string dump_tableau(const LinearProgram& lp);

}  // namespace irrigation
