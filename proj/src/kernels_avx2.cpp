#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "vfi/kernels/reduce.hpp"

namespace vfi::kernels::detail {

namespace {

// (l0+l2) + (l1+l3): add the two 128-bit halves lane-wise, then the two
// remaining lanes. Matches the scalar reference combine exactly.
inline double hsum_fixed_tree(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);   // [l0, l1]
  __m128d hi = _mm256_extractf128_pd(acc, 1); // [l2, l3]
  __m128d s = _mm_add_pd(lo, hi);             // [l0+l2, l1+l3]
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

double block_wsum_avx2(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ww = _mm256_loadu_pd(w + i);
    __m256d xx = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(ww, xx));
  }
  if (i < n) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t j = 0; i + j < n; ++j) lane[j] += w[i + j] * x[i + j];
    acc = _mm256_load_pd(lane);
  }
  return hsum_fixed_tree(acc);
}

double block_wdot_avx2(const double* w, const double* x, const double* y,
                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ww = _mm256_loadu_pd(w + i);
    __m256d xx = _mm256_loadu_pd(x + i);
    __m256d yy = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(xx, yy), ww));
  }
  if (i < n) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t j = 0; i + j < n; ++j)
      lane[j] += (x[i + j] * y[i + j]) * w[i + j];
    acc = _mm256_load_pd(lane);
  }
  return hsum_fixed_tree(acc);
}

}  // namespace vfi::kernels::detail

#endif  // x86_64
