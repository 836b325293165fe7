#include "navobs/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace navobs::kernels {

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &scalar::riccati_rhs, &scalar::accumulate_gram};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(NAVOBS_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::riccati_rhs, &avx2::accumulate_gram};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("NAVOBS_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace navobs::kernels
