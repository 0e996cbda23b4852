// AArch64 variant; Advanced SIMD is part of the base architecture there.

#include <arm_neon.h>

#include <cmath>

#include "irrigation/kernels.hpp"
#include "kernels_impl.hpp"

namespace irrigation::kernels::detail {

namespace {

void eliminate(std::span<double> row, std::span<const double> pivot, double factor) {
  const std::size_t n = row.size();
  double* r = row.data();
  const double* p = pivot.data();
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    // vmulq + vsubq rather than vfmsq: must round like the scalar kernel.
    const float64x2_t prod = vmulq_f64(f, vld1q_f64(p + j));
    vst1q_f64(r + j, vsubq_f64(vld1q_f64(r + j), prod));
  }
  for (; j < n; ++j) {
    const double product = factor * p[j];
    r[j] = r[j] - product;
  }
}

void divide(std::span<double> row, double divisor) {
  const std::size_t n = row.size();
  double* r = row.data();
  const float64x2_t d = vdupq_n_f64(divisor);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) vst1q_f64(r + j, vdivq_f64(vld1q_f64(r + j), d));
  for (; j < n; ++j) r[j] = r[j] / divisor;
}

std::size_t argmin_below(std::span<const double> values, double threshold) {
  // Two lanes gain little over the scalar scan; keep the reference loop.
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
  const std::size_t n = values.size();
  const double* v = values.data();
  const float64x2_t t = vdupq_n_f64(threshold);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const uint64x2_t lt = vcltq_f64(vld1q_f64(v + j), t);
    if (vgetq_lane_u64(lt, 0)) return j;
    if (vgetq_lane_u64(lt, 1)) return j + 1;
  }
  for (; j < n; ++j) {
    if (v[j] < threshold) return j;
  }
  return npos;
}

double max_abs(std::span<const double> values) {
  const std::size_t n = values.size();
  const double* v = values.data();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) acc = vmaxnmq_f64(acc, vabsq_f64(vld1q_f64(v + j)));
  double m = std::fmax(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  for (; j < n; ++j) m = std::fmax(m, std::fabs(v[j]));
  return m;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::neon, eliminate, divide, argmin_below, first_below, max_abs};
  return table;
}

}  // namespace irrigation::kernels::detail
