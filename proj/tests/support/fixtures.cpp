#include "fixtures.hpp"

#include "irrigation/pareto.hpp"

namespace irrigation::testing {

ScenarioDraft small_draft(std::size_t n_crops, std::size_t n_months) {
  ScenarioDraft d;
  for (std::size_t c = 0; c < n_crops; ++c) {
    d.crops.push_back({"crop" + std::to_string(c), 1000.0 + 100.0 * static_cast<double>(c), 300.0});
  }
  for (std::size_t m = 0; m < n_months; ++m) d.months.push_back({0.01, 0.001, 100.0, 40.0});
  d.coefficients.assign(n_crops, std::vector<double>(n_months, 1.0));
  d.limits = {10.0, 1000.0 * static_cast<double>(n_crops), 0.0, 100.0, 300.0, 2000.0, 100.0};
  return d;
}

LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t max_vars, std::size_t max_rows) {
  std::uniform_int_distribution<int> coef(-10, 10);
  std::uniform_int_distribution<std::size_t> vars(1, max_vars);
  std::uniform_int_distribution<std::size_t> rows(1, max_rows);
  std::uniform_int_distribution<int> slack(0, 5);
  std::uniform_int_distribution<int> relation(0, 5);

  LinearProgram lp(coef(rng) >= 0 ? Sense::maximize : Sense::minimize);
  const std::size_t n = vars(rng);
  std::vector<double> x0(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lower = std::uniform_int_distribution<int>(-3, 0)(rng);
    const double upper = lower + std::uniform_int_distribution<int>(1, 10)(rng);
    x0[j] = std::uniform_int_distribution<int>(static_cast<int>(lower), static_cast<int>(upper))(rng);
    lp.add_variable("x" + std::to_string(j), lower, upper, coef(rng));
  }
  const std::size_t m = rows(rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> a(n);
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = coef(rng);
      ax += a[j] * x0[j];
    }
    const int r = relation(rng);
    if (r == 0) {
      lp.add_dense_constraint(a, Relation::equal, ax);
    } else if (r <= 3) {
      lp.add_dense_constraint(a, Relation::less_equal, ax + slack(rng));
    } else {
      lp.add_dense_constraint(a, Relation::greater_equal, ax - slack(rng));
    }
  }
  return lp;
}

std::vector<std::size_t> quadratic_nondominated(const std::vector<ObjectivePair>& points) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (dominates(points[j], points[i])) keep = false;
      if (j < i && points[j] == points[i]) keep = false;
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

}  // namespace irrigation::testing
