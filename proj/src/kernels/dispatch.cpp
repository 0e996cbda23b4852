#include "irrigation/kernels.hpp"
#include "kernels_impl.hpp"

namespace irrigation::kernels {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* avx2() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() {
#if defined(__aarch64__)
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

const KernelTable& best() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    if (const auto* t = avx2()) return *t;
    if (const auto* t = neon()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace irrigation::kernels
