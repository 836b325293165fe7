// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// a CPU feature check.
#include "navobs/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace navobs::kernels::avx2 {

namespace {

// dst(:, j) = sum_k lhs(:, k) * rhs(k, j) for 9x9 column-major operands.
// Rows 0-3 and 4-7 go through two ymm accumulators, row 8 is scalar.
inline void matmul9(const double* lhs, const double* rhs, double* dst) {
  for (int j = 0; j < kDim; ++j) {
    __m256d lo = _mm256_setzero_pd();
    __m256d hi = _mm256_setzero_pd();
    double tail = 0.0;
    for (int k = 0; k < kDim; ++k) {
      const double* col = lhs + k * kDim;
      const double r = rhs[j * kDim + k];
      const __m256d b = _mm256_set1_pd(r);
      lo = _mm256_fmadd_pd(_mm256_loadu_pd(col), b, lo);
      hi = _mm256_fmadd_pd(_mm256_loadu_pd(col + 4), b, hi);
      tail += col[8] * r;
    }
    _mm256_storeu_pd(dst + j * kDim, lo);
    _mm256_storeu_pd(dst + j * kDim + 4, hi);
    dst[j * kDim + 8] = tail;
  }
}

}  // namespace

void riccati_rhs(const double* p, const double* m, const double* v, double gamma,
                 double* out) {
  alignas(32) double mp[kSize];
  alignas(32) double pmp[kSize];
  matmul9(m, p, mp);
  matmul9(p, mp, pmp);

  const __m256d g = _mm256_set1_pd(gamma);
  for (int j = 0; j < kDim; ++j) {
    const int c = j * kDim;
    // (P A^T)(i, j) = P(i, j + 3) for j < 6.
    alignas(32) double pat[kDim] = {};
    if (j < 6) std::copy(p + (j + 3) * kDim, p + (j + 4) * kDim, pat);
    // (A P)(i, j) = P(i + 3, j) for i < 6.
    alignas(32) double ap[kDim] = {};
    std::copy(p + c + 3, p + c + 9, ap);

    for (int i = 0; i < 8; i += 4) {
      __m256d acc = _mm256_add_pd(_mm256_loadu_pd(ap + i), _mm256_load_pd(pat + i));
      acc = _mm256_sub_pd(acc, _mm256_loadu_pd(pmp + c + i));
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + c + i));
      _mm256_storeu_pd(out + c + i, _mm256_mul_pd(g, acc));
    }
    out[c + 8] = gamma * (ap[8] + pat[8] - pmp[c + 8] + v[c + 8]);
  }
}

void accumulate_gram(const double* g, std::size_t rows, double weight, double* w_acc) {
  constexpr std::size_t kChunk = 16;
  // Row-major copy of a chunk of G so each row is one contiguous 9-vector.
  alignas(32) double block[kChunk][12];
  for (std::size_t r0 = 0; r0 < rows; r0 += kChunk) {
    const std::size_t n = std::min(kChunk, rows - r0);
    for (std::size_t r = 0; r < n; ++r) {
      for (int c = 0; c < kDim; ++c) block[r][c] = g[c * rows + r0 + r];
    }
    for (int j = 0; j < kDim; ++j) {
      __m256d lo = _mm256_setzero_pd();
      __m256d hi = _mm256_setzero_pd();
      double tail = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double s = block[r][j];
        const __m256d b = _mm256_set1_pd(s);
        lo = _mm256_fmadd_pd(_mm256_load_pd(&block[r][0]), b, lo);
        hi = _mm256_fmadd_pd(_mm256_load_pd(&block[r][4]), b, hi);
        tail += block[r][8] * s;
      }
      double* col = w_acc + j * kDim;
      const __m256d wv = _mm256_set1_pd(weight);
      _mm256_storeu_pd(col, _mm256_fmadd_pd(wv, lo, _mm256_loadu_pd(col)));
      _mm256_storeu_pd(col + 4, _mm256_fmadd_pd(wv, hi, _mm256_loadu_pd(col + 4)));
      col[8] += weight * tail;
    }
  }
}

}  // namespace navobs::kernels::avx2
