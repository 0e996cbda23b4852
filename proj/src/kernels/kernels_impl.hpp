#pragma once

#include "irrigation/kernels.hpp"

namespace irrigation::kernels::detail {

// Defined only in the translation units built for the matching target.
const KernelTable& avx2_table();
const KernelTable& neon_table();

}  // namespace irrigation::kernels::detail
