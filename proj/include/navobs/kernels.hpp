#pragma once

// Dense inner loops shared by the Riccati propagator and the Gramian
// quadrature. Every kernel has a portable scalar reference and, on x86-64,
// an AVX2/FMA variant. The active table is chosen once at startup from CPU
// features; NAVOBS_SIMD=scalar in the environment forces the reference.
//
// All matrices are 9x9, column-major, contiguous (Eigen's default layout).

#include <cstddef>
#include <string_view>

namespace navobs::kernels {

inline constexpr int kDim = 9;
inline constexpr int kSize = kDim * kDim;

// out = gamma * (A P + P A^T - P M P + V) with A the 9x9 triple-integrator
// shift (identity blocks at (0,1) and (1,2)). P, M, V symmetric.
using RiccatiRhsFn = void (*)(const double* p, const double* m, const double* v,
                              double gamma, double* out);

// w_acc += weight * G^T G, with G rows x 9, column-major with leading
// dimension `rows`.
using AccumulateGramFn = void (*)(const double* g, std::size_t rows, double weight,
                                  double* w_acc);

struct KernelTable {
  std::string_view name;
  RiccatiRhsFn riccati_rhs;
  AccumulateGramFn accumulate_gram;
};

const KernelTable& scalar_kernels();

/// Null when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// Table selected for this process.
const KernelTable& active();

namespace scalar {
void riccati_rhs(const double* p, const double* m, const double* v, double gamma,
                 double* out);
void accumulate_gram(const double* g, std::size_t rows, double weight, double* w_acc);
}  // namespace scalar

#if defined(NAVOBS_HAVE_AVX2)
namespace avx2 {
void riccati_rhs(const double* p, const double* m, const double* v, double gamma,
                 double* out);
void accumulate_gram(const double* g, std::size_t rows, double weight, double* w_acc);
}  // namespace avx2
#endif

}  // namespace navobs::kernels
