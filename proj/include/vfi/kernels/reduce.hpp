#pragma once

#include <cstddef>
#include <string>

namespace vfi::kernels {

// Deterministic weighted reductions. Every backend follows one fixed
// summation order so results are identical bit-for-bit across scalar/SIMD
// backends and across thread counts:
//
//   * the index range is cut into blocks of kBlock elements;
//   * inside a block, four lane accumulators l0..l3 are kept and local
//     element i contributes to lane (i mod 4), in increasing i;
//   * the block value is (l0+l2) + (l1+l3);
//   * block values are combined by a fixed binary tree (split at the
//     midpoint), independent of how work was scheduled.
//
// Products are associated as w[i]*x[i] (weighted_sum) and
// (x[i]*y[i])*w[i] (weighted_dot). FP contraction is disabled build-wide.

inline constexpr std::size_t kBlock = 1024;

// sum_i w[i]*x[i]
double weighted_sum(const double* w, const double* x, std::size_t n);

// sum_i (x[i]*y[i])*w[i]
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
const char* backend_name(Backend b);

// Testing hook; normally the backend is picked once from CPU features and
// the VFI_KERNEL environment variable ("scalar" forces the reference path).
void force_backend(Backend b);

// Raw per-block entry points (exposed for the equivalence tests).
namespace detail {
double block_wsum_scalar(const double* w, const double* x, std::size_t n);
double block_wdot_scalar(const double* w, const double* x, const double* y,
                         std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
double block_wsum_avx2(const double* w, const double* x, std::size_t n);
double block_wdot_avx2(const double* w, const double* x, const double* y,
                       std::size_t n);
#endif
#if defined(__aarch64__)
double block_wsum_neon(const double* w, const double* x, std::size_t n);
double block_wdot_neon(const double* w, const double* x, const double* y,
                       std::size_t n);
#endif
}  // namespace detail

}  // namespace vfi::kernels
