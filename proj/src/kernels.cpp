#include "vfi/kernels/reduce.hpp"

#include <cstdlib>
#include <cstring>
#include <vector>

namespace vfi::kernels {

namespace {

Backend pick_backend() {
  const char* env = std::getenv("VFI_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (env && std::strcmp(env, "avx2") == 0) return Backend::Avx2;
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
#if defined(__aarch64__)
  if (env && std::strcmp(env, "neon") == 0) return Backend::Neon;
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

Backend g_backend = pick_backend();

using WsumFn = double (*)(const double*, const double*, std::size_t);
using WdotFn = double (*)(const double*, const double*, const double*,
                          std::size_t);

WsumFn wsum_fn() {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
      return detail::block_wsum_avx2;
#endif
#if defined(__aarch64__)
    case Backend::Neon:
      return detail::block_wsum_neon;
#endif
    default:
      return detail::block_wsum_scalar;
  }
}

WdotFn wdot_fn() {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
      return detail::block_wdot_avx2;
#endif
#if defined(__aarch64__)
    case Backend::Neon:
      return detail::block_wdot_neon;
#endif
    default:
      return detail::block_wdot_scalar;
  }
}

// Fixed midpoint-split binary tree over block partial sums.
double tree_combine(const std::vector<double>& v, std::size_t lo,
                    std::size_t hi) {
  if (lo == hi) return v[lo];
  std::size_t mid = (lo + hi) / 2;
  return tree_combine(v, lo, mid) + tree_combine(v, mid + 1, hi);
}

}  // namespace

Backend active_backend() { return g_backend; }

void force_backend(Backend b) { g_backend = b; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "?";
}

double weighted_sum(const double* w, const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  WsumFn f = wsum_fn();
  if (n <= kBlock) return f(w, x, n);
  std::vector<double> blocks;
  blocks.reserve(n / kBlock + 1);
  for (std::size_t i = 0; i < n; i += kBlock)
    blocks.push_back(f(w + i, x + i, std::min(kBlock, n - i)));
  return tree_combine(blocks, 0, blocks.size() - 1);
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
  if (n == 0) return 0.0;
  WdotFn f = wdot_fn();
  if (n <= kBlock) return f(w, x, y, n);
  std::vector<double> blocks;
  blocks.reserve(n / kBlock + 1);
  for (std::size_t i = 0; i < n; i += kBlock)
    blocks.push_back(f(w + i, x + i, y + i, std::min(kBlock, n - i)));
  return tree_combine(blocks, 0, blocks.size() - 1);
}

}  // namespace vfi::kernels
