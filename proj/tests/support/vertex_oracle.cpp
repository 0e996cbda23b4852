#include "vertex_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace irrigation::testing {

namespace {

struct Plane {
  std::vector<double> a;
  double b;
};

// Gaussian elimination with partial pivoting; false when singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-10) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

}  // namespace

LpSolution brute_force_vertex_oracle(const LinearProgram& lp, double tolerance) {
  const std::size_t n = lp.variable_count();
  if (n > 8 || lp.constraint_count() > 10) throw std::invalid_argument("oracle is limited to 8 variables and 10 constraints");

  std::vector<Plane> planes;
  for (const auto& row : lp.constraints()) planes.push_back({row.coeffs, row.rhs});
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    if (std::isfinite(lp.lower()[j])) planes.push_back({e, lp.lower()[j]});
    if (std::isfinite(lp.upper()[j])) planes.push_back({e, lp.upper()[j]});
  }

  LpSolution best;
  best.status = LpStatus::infeasible;
  const bool maximize = lp.sense() == Sense::maximize;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  if (planes.size() < n) return best;

  while (true) {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (std::size_t i : pick) {
      m.push_back(planes[i].a);
      rhs.push_back(planes[i].b);
    }
    std::vector<double> x;
    if (solve_square(m, rhs, x) && lp.max_violation(x) <= tolerance * 1e3) {
      const double value = lp.objective_at(x);
      if (best.status != LpStatus::optimal || (maximize ? value > best.objective_value : value < best.objective_value)) {
        best.status = LpStatus::optimal;
        best.values = x;
        best.objective_value = value;
      }
    }
    // Next n-combination in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == planes.size() - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace irrigation::testing
