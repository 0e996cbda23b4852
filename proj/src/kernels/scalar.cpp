#include <cmath>

#include "irrigation/kernels.hpp"
#include "kernels_impl.hpp"

namespace irrigation::kernels {

namespace {

void eliminate(std::span<double> row, std::span<const double> pivot, double factor) {
  const std::size_t n = row.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double product = factor * pivot[j];
    row[j] = row[j] - product;
  }
}

void divide(std::span<double> row, double divisor) {
  for (double& v : row) v = v / divisor;
}

std::size_t argmin_below(std::span<const double> values, double threshold) {
  std::size_t best = npos;
  double best_value = threshold;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < best_value) {
      best_value = values[j];
      best = j;
    }
  }
  return best;
}

std::size_t first_below(std::span<const double> values, double threshold) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] < threshold) return j;
  }
  return npos;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::fmax(m, std::fabs(v));
  return m;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{Isa::scalar, eliminate, divide, argmin_below, first_below, max_abs};
  return table;
}

}  // namespace irrigation::kernels
