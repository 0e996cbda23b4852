#pragma once

// Inner loops of the dense simplex tableau. Every kernel has a scalar
// reference implementation and optional SIMD variants; all variants produce
// bit-identical results (element-wise IEEE operations only, no FMA, no
// reordered reductions), which the equivalence tests rely on.

#include <cstddef>
#include <span>

namespace irrigation::kernels {

enum class Isa { scalar, avx2, neon };

const char* to_string(Isa isa);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct KernelTable {
  Isa isa;
  // row[j] -= factor * pivot[j]
  void (*eliminate)(std::span<double> row, std::span<const double> pivot, double factor);
  // row[j] /= divisor
  void (*divide)(std::span<double> row, double divisor);
  // Index of the smallest value strictly below threshold; first index on
  // ties; npos when none.
  std::size_t (*argmin_below)(std::span<const double> values, double threshold);
  // First index whose value is strictly below threshold; npos when none.
  std::size_t (*first_below)(std::span<const double> values, double threshold);
  // max |v|, 0 for an empty span.
  double (*max_abs)(std::span<const double> values);
};

const KernelTable& scalar();

/// SIMD tables compiled into this binary *and* supported by the running CPU;
/// nullptr otherwise.
const KernelTable* avx2();
const KernelTable* neon();

/// Best table for the running CPU, detected once.
const KernelTable& best();

}  // namespace irrigation::kernels
