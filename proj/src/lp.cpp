#include "irrigation/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace irrigation {

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::less_equal: return "<=";
    case Relation::greater_equal: return ">=";
    case Relation::equal: return "=";
  }
  return "?";
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

std::size_t LinearProgram::add_variable(std::string name, double lower, double upper, double cost) {
  costs_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  for (auto& row : constraints_) row.coeffs.push_back(0.0);
  return costs_.size() - 1;
}

void LinearProgram::add_constraint(const std::vector<std::pair<std::size_t, double>>& terms, Relation relation,
                                   double rhs, std::string name) {
  std::vector<double> coeffs(variable_count(), 0.0);
  for (const auto& [index, value] : terms) {
    if (index >= coeffs.size()) throw std::invalid_argument("constraint term refers to unknown variable " + std::to_string(index));
    coeffs[index] += value;
  }
  constraints_.push_back({std::move(coeffs), relation, rhs, std::move(name)});
}

void LinearProgram::add_dense_constraint(std::vector<double> coeffs, Relation relation, double rhs, std::string name) {
  if (coeffs.size() != variable_count()) {
    throw std::invalid_argument("constraint has " + std::to_string(coeffs.size()) + " coefficients for " +
                                std::to_string(variable_count()) + " variables");
  }
  constraints_.push_back({std::move(coeffs), relation, rhs, std::move(name)});
}

void LinearProgram::set_bounds(std::size_t var, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("lower > upper for variable " + names_.at(var));
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

void LinearProgram::check() const {
  const std::size_t n = variable_count();
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(costs_[j])) throw std::invalid_argument("non-finite cost for variable " + names_[j]);
    if (!std::isfinite(lower_[j])) throw std::invalid_argument("lower bound must be finite for variable " + names_[j]);
    if (std::isnan(upper_[j]) || upper_[j] == -kInfinity) {
      throw std::invalid_argument("invalid upper bound for variable " + names_[j]);
    }
    if (lower_[j] > upper_[j]) throw std::invalid_argument("lower > upper for variable " + names_[j]);
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& row = constraints_[i];
    if (row.coeffs.size() != n) {
      throw std::invalid_argument("constraint " + std::to_string(i) + " has " + std::to_string(row.coeffs.size()) +
                                  " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs in constraint " + std::to_string(i));
    for (double a : row.coeffs) {
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite coefficient in constraint " + std::to_string(i));
    }
  }
}

double LinearProgram::objective_at(const std::vector<double>& x) const {
  double z = offset_;
  for (std::size_t j = 0; j < costs_.size(); ++j) z += costs_[j] * x[j];
  return z;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < costs_.size(); ++j) {
    worst = std::max({worst, lower_[j] - x[j], x[j] - upper_[j]});
  }
  for (const auto& row : constraints_) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    switch (row.relation) {
      case Relation::less_equal: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::greater_equal: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

// Power-of-two scale bringing max_abs to [0.5, 1): exact, so scaling never
// perturbs the data.
double pow2_inverse(double max_abs) {
  if (!(max_abs > 0.0)) return 1.0;
  int exponent = 0;
  std::frexp(max_abs, &exponent);
  return std::ldexp(1.0, -exponent);
}

constexpr double kPivotTolerance = 1e-9;
constexpr std::size_t kDegenerateStreakLimit = 50;

class Simplex {
 public:
  Simplex(std::size_t rows, std::size_t cols, const kernels::KernelTable& k)
      : rows_(rows), cols_(cols), width_(cols + 1), k_(k), data_(rows * width_, 0.0), obj_(width_, 0.0),
        basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
  double rhs(std::size_t i) const { return data_[i * width_ + cols_]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * width_, width_}; }
  std::span<double> obj() { return obj_; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t q) {
    auto pivot_row = row(r);
    k_.divide(pivot_row, pivot_row[q]);
    pivot_row[q] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* cell = &data_[i * width_ + q];
      const double f = *cell;
      if (f != 0.0) {
        k_.eliminate(row(i), pivot_row, f);
        *cell = 0.0;
      }
    }
    const double f = obj_[q];
    if (f != 0.0) {
      k_.eliminate(obj_, pivot_row, f);
      obj_[q] = 0.0;
    }
    basis_[r] = q;
  }

  enum class Outcome { optimal, unbounded };

  // Minimizes the objective row over entering columns [0, eligible).
  Outcome run(std::size_t eligible, double tolerance, std::size_t dantzig_limit, std::size_t cap,
              std::size_t& iterations) {
    bool bland = false;
    std::size_t phase_pivots = 0;
    std::size_t degenerate_streak = 0;
    for (;;) {
      const std::span<const double> reduced(obj_.data(), eligible);
      const std::size_t q = bland ? k_.first_below(reduced, -tolerance) : k_.argmin_below(reduced, -tolerance);
      if (q == kernels::npos) return Outcome::optimal;

      std::size_t r = kernels::npos;
      double best_ratio = 0.0;
      double best_coeff = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = data_[i * width_ + q];
        if (!(a > kPivotTolerance)) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        bool take = r == kernels::npos || ratio < best_ratio;
        if (!take && ratio == best_ratio) take = bland ? basis_[i] < basis_[r] : a > best_coeff;
        if (take) {
          r = i;
          best_ratio = ratio;
          best_coeff = a;
        }
      }
      if (r == kernels::npos) return Outcome::unbounded;

      if (iterations >= cap) {
        throw SolverFault("simplex iteration cap of " + std::to_string(cap) + " exceeded");
      }
      degenerate_streak = rhs(r) <= tolerance ? degenerate_streak + 1 : 0;
      pivot(r, q);
      ++iterations;
      ++phase_pivots;
      if (phase_pivots >= dantzig_limit || degenerate_streak >= kDegenerateStreakLimit) bland = true;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  const kernels::KernelTable& k_;
  std::vector<double> data_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

struct ScaledRow {
  std::vector<double> coeffs;  // structural part, scaled
  Relation relation;
  double rhs;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options) {
  lp.check();
  const auto& k = options.kernels != nullptr ? *options.kernels : kernels::best();
  const double tol = options.tolerance;
  const std::size_t n = lp.variable_count();
  const std::size_t m = lp.constraint_count();
  const std::size_t cap = 50 * std::max<std::size_t>(n + m, 1);
  const std::size_t dantzig_limit = options.dantzig_pivot_limit != 0 ? options.dantzig_pivot_limit : 10 * (n + m);

  // Row then column equilibration.
  std::vector<double> row_scale(m);
  for (std::size_t i = 0; i < m; ++i) row_scale[i] = pow2_inverse(k.max_abs(lp.constraints()[i].coeffs));
  std::vector<double> col_scale(n);
  for (std::size_t j = 0; j < n; ++j) {
    double mx = 0.0;
    for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, std::abs(lp.constraints()[i].coeffs[j] * row_scale[i]));
    col_scale[j] = pow2_inverse(mx);  // x = s * x'
  }

  // Shift x' = l' + y so every structural variable has lower bound 0, and turn
  // finite upper bounds into rows.
  std::vector<ScaledRow> rows;
  rows.reserve(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& src = lp.constraints()[i];
    ScaledRow row{std::vector<double>(n), src.relation, src.rhs * row_scale[i]};
    for (std::size_t j = 0; j < n; ++j) {
      row.coeffs[j] = src.coeffs[j] * row_scale[i] * col_scale[j];
      row.rhs -= row.coeffs[j] * (lp.lower()[j] / col_scale[j]);
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.upper()[j] == kInfinity) continue;
    ScaledRow row{std::vector<double>(n, 0.0), Relation::less_equal,
                  lp.upper()[j] / col_scale[j] - lp.lower()[j] / col_scale[j]};
    row.coeffs[j] = 1.0;
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::less_equal) {
        row.relation = Relation::greater_equal;
      } else if (row.relation == Relation::greater_equal) {
        row.relation = Relation::less_equal;
      }
    }
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::equal) ++n_slack;
    if (row.relation != Relation::less_equal) ++n_art;
  }
  const std::size_t first_art = n + n_slack;
  const std::size_t cols = first_art + n_art;
  Simplex tab(rows.size(), cols, k);

  double rhs_scale = 1.0;
  {
    std::size_t slack = n;
    std::size_t art = first_art;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      std::copy(row.coeffs.begin(), row.coeffs.end(), tab.row(i).begin());
      tab.at(i, cols) = row.rhs;
      rhs_scale = std::max(rhs_scale, row.rhs);
      switch (row.relation) {
        case Relation::less_equal:
          tab.at(i, slack) = 1.0;
          tab.basis(i) = slack++;
          break;
        case Relation::greater_equal:
          tab.at(i, slack++) = -1.0;
          tab.at(i, art) = 1.0;
          tab.basis(i) = art++;
          break;
        case Relation::equal:
          tab.at(i, art) = 1.0;
          tab.basis(i) = art++;
          break;
      }
    }
  }

  LpSolution solution;
  std::size_t iterations = 0;

  if (n_art > 0) {
    auto obj = tab.obj();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = first_art; j < cols; ++j) obj[j] = 1.0;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (tab.basis(i) >= first_art) k.eliminate(obj, tab.row(i), 1.0);
    }
    tab.run(first_art, tol, dantzig_limit, cap, iterations);
    const double infeasibility = -tab.obj()[cols];
    if (infeasibility > tol * rhs_scale) {
      solution.status = LpStatus::infeasible;
      solution.iterations = iterations;
      return solution;
    }
    // Pivot zero-valued artificials out; rows with no usable entry are
    // redundant and keep their artificial basic at zero.
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (tab.basis(i) < first_art) continue;
      std::size_t best = kernels::npos;
      double best_abs = kPivotTolerance;
      for (std::size_t j = 0; j < first_art; ++j) {
        const double a = std::abs(tab.at(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best != kernels::npos) tab.pivot(i, best);
    }
  }

  // Phase 2 objective, always minimized internally.
  {
    std::vector<double> scaled_cost(n);
    for (std::size_t j = 0; j < n; ++j) {
      scaled_cost[j] = lp.costs()[j] * col_scale[j] * (lp.sense() == Sense::maximize ? -1.0 : 1.0);
    }
    const double obj_scale = pow2_inverse(k.max_abs(scaled_cost));
    auto obj = tab.obj();
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) obj[j] = scaled_cost[j] * obj_scale;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const std::size_t b = tab.basis(i);
      if (b < n && obj[b] != 0.0) {
        k.eliminate(obj, tab.row(i), obj[b]);
        obj[b] = 0.0;
      }
    }
  }
  const auto outcome = tab.run(first_art, tol, dantzig_limit, cap, iterations);
  solution.iterations = iterations;
  if (outcome == Simplex::Outcome::unbounded) {
    solution.status = LpStatus::unbounded;
    return solution;
  }

  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (tab.basis(i) < n) y[tab.basis(i)] = std::max(tab.rhs(i), 0.0);
  }
  solution.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = lp.lower()[j] + col_scale[j] * y[j];
    solution.values[j] = std::clamp(x, lp.lower()[j], lp.upper()[j]);
  }

  // Sanity check in scaled units; a miss here means numerical trouble, not a
  // property of the model.
  for (std::size_t i = 0; i < m; ++i) {
    const auto& src = lp.constraints()[i];
    double lhs = 0.0;
    double magnitude = std::abs(src.rhs);
    for (std::size_t j = 0; j < n; ++j) {
      lhs += src.coeffs[j] * solution.values[j];
      magnitude += std::abs(src.coeffs[j] * solution.values[j]);
    }
    double violation = 0.0;
    switch (src.relation) {
      case Relation::less_equal: violation = lhs - src.rhs; break;
      case Relation::greater_equal: violation = src.rhs - lhs; break;
      case Relation::equal: violation = std::abs(lhs - src.rhs); break;
    }
    if (violation * row_scale[i] > 1e-7 * (1.0 + magnitude * row_scale[i])) {
      std::ostringstream msg;
      msg << "solution violates constraint " << i;
      if (!src.name.empty()) msg << " (" << src.name << ")";
      msg << " by " << violation;
      throw SolverFault(msg.str());
    }
  }

  solution.status = LpStatus::optimal;
  solution.objective_value = lp.objective_at(solution.values);
  return solution;
}

std::string dump_tableau(const LinearProgram& lp) {
  std::ostringstream out;
  const std::size_t n = lp.variable_count();
  auto cell = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12.6g", v);
    return std::string(buf);
  };
  auto label = [](const std::string& s) {
    std::string t = s.size() > 12 ? s.substr(0, 12) : s;
    return std::string(12 - t.size(), ' ') + t;
  };

  out << "# " << (lp.sense() == Sense::maximize ? "maximize" : "minimize") << ", " << n << " variables, "
      << lp.constraint_count() << " constraints, objective offset " << lp.objective_offset() << '\n';
  out << label("row");
  for (const auto& name : lp.names()) out << ' ' << label(name);
  out << "  rel          rhs\n";
  out << label("objective");
  for (double c : lp.costs()) out << ' ' << cell(c);
  out << '\n';
  for (std::size_t i = 0; i < lp.constraint_count(); ++i) {
    const auto& row = lp.constraints()[i];
    out << label(row.name.empty() ? "c" + std::to_string(i) : row.name);
    for (double a : row.coeffs) out << ' ' << cell(a);
    out << "  " << std::string(to_string(row.relation)) + std::string(3 - std::string(to_string(row.relation)).size(), ' ')
        << ' ' << cell(row.rhs) << '\n';
  }
  out << label("lower");
  for (double l : lp.lower()) out << ' ' << cell(l);
  out << '\n' << label("upper");
  for (double u : lp.upper()) out << ' ' << (u == kInfinity ? label("inf") : cell(u));
  out << '\n';
  return out.str();
}

}  // namespace irrigation
