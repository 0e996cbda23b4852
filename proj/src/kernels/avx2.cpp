// Built with -mavx2 and only entered after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "irrigation/kernels.hpp"
#include "kernels_impl.hpp"

namespace irrigation::kernels::detail {

namespace {

void eliminate(std::span<double> row, std::span<const double> pivot, double factor) {
  const std::size_t n = row.size();
  double* r = row.data();
  const double* p = pivot.data();
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d r0 = _mm256_loadu_pd(r + j);
    __m256d r1 = _mm256_loadu_pd(r + j + 4);
    r0 = _mm256_sub_pd(r0, _mm256_mul_pd(f, _mm256_loadu_pd(p + j)));
    r1 = _mm256_sub_pd(r1, _mm256_mul_pd(f, _mm256_loadu_pd(p + j + 4)));
    _mm256_storeu_pd(r + j, r0);
    _mm256_storeu_pd(r + j + 4, r1);
  }
  for (; j + 4 <= n; j += 4) {
    __m256d r0 = _mm256_loadu_pd(r + j);
    r0 = _mm256_sub_pd(r0, _mm256_mul_pd(f, _mm256_loadu_pd(p + j)));
    _mm256_storeu_pd(r + j, r0);
  }
  for (; j < n; ++j) {
    const double product = factor * p[j];
    r[j] = r[j] - product;
  }
}

void divide(std::span<double> row, double divisor) {
  const std::size_t n = row.size();
  double* r = row.data();
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(r + j, _mm256_div_pd(_mm256_loadu_pd(r + j), d));
  for (; j < n; ++j) r[j] = r[j] / divisor;
}

std::size_t argmin_below(std::span<const double> values, double threshold) {
  const std::size_t n = values.size();
  const double* v = values.data();
  std::size_t j = 0;
  std::size_t best = npos;
  double best_value = threshold;

  if (n >= 4) {
    // Per-lane running minimum and the first index that attained it.
    __m256d lane_min = _mm256_set1_pd(threshold);
    __m256d lane_idx = _mm256_set1_pd(-1.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (; j + 4 <= n; j += 4) {
      const __m256d x = _mm256_loadu_pd(v + j);
      const __m256d lt = _mm256_cmp_pd(x, lane_min, _CMP_LT_OQ);
      lane_min = _mm256_blendv_pd(lane_min, x, lt);
      lane_idx = _mm256_blendv_pd(lane_idx, idx, lt);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double mins[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(mins, lane_min);
    _mm256_store_pd(idxs, lane_idx);
    for (int lane = 0; lane < 4; ++lane) {
      if (idxs[lane] < 0.0) continue;
      const auto lane_best = static_cast<std::size_t>(idxs[lane]);
      if (mins[lane] < best_value || (mins[lane] == best_value && best != npos && lane_best < best)) {
        best_value = mins[lane];
        best = lane_best;
      }
    }
  }
  for (; j < n; ++j) {
    if (v[j] < best_value) {
      best_value = v[j];
      best = j;
    }
  }
  return best;
}

std::size_t first_below(std::span<const double> values, double threshold) {
  const std::size_t n = values.size();
  const double* v = values.data();
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + j), t, _CMP_LT_OQ));
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < n; ++j) {
    if (v[j] < threshold) return j;
  }
  return npos;
}

double max_abs(std::span<const double> values) {
  const std::size_t n = values.size();
  const double* v = values.data();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(v + j));
    acc = _mm256_max_pd(a, acc);  // NaN in a yields acc
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; j < n; ++j) m = std::fmax(m, std::fabs(v[j]));
  return m;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2, eliminate, divide, argmin_below, first_below, max_abs};
  return table;
}

}  // namespace irrigation::kernels::detail
