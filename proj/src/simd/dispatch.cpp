#include <cstdlib>
#include <cstring>

#include "anisolab/simd/kernels.hpp"

namespace anisolab::simd {

#if defined(ANISOLAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(ANISOLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* isa = std::getenv("ANISOLAB_ISA");
    if (isa != nullptr && std::strcmp(isa, "scalar") == 0) return scalar_kernels();
    const KernelTable* fast = avx2_kernels();
    return fast != nullptr ? *fast : scalar_kernels();
  }();
  return chosen;
}

}  // namespace anisolab::simd
