#pragma once

#include "csvx/kernels.hpp"

namespace csvx::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(CSVX_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(CSVX_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace csvx::kernels::detail
