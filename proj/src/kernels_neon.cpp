#if defined(__aarch64__)

#include <arm_neon.h>

#include "vfi/kernels/reduce.hpp"

namespace vfi::kernels::detail {

// Two 2-lane registers emulate the 4-lane layout: r01 holds lanes 0,1 and
// r23 holds lanes 2,3. Final combine (l0+l2) + (l1+l3) matches scalar.

double block_wsum_neon(const double* w, const double* x, std::size_t n) {
  float64x2_t r01 = vdupq_n_f64(0.0), r23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    r01 = vaddq_f64(r01, vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i)));
    r23 = vaddq_f64(r23, vmulq_f64(vld1q_f64(w + i + 2), vld1q_f64(x + i + 2)));
  }
  double lane[4] = {vgetq_lane_f64(r01, 0), vgetq_lane_f64(r01, 1),
                    vgetq_lane_f64(r23, 0), vgetq_lane_f64(r23, 1)};
  for (std::size_t j = 0; i + j < n; ++j) lane[j] += w[i + j] * x[i + j];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double block_wdot_neon(const double* w, const double* x, const double* y,
                       std::size_t n) {
  float64x2_t r01 = vdupq_n_f64(0.0), r23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t t0 =
        vmulq_f64(vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)), vld1q_f64(w + i));
    float64x2_t t1 = vmulq_f64(
        vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)), vld1q_f64(w + i + 2));
    r01 = vaddq_f64(r01, t0);
    r23 = vaddq_f64(r23, t1);
  }
  double lane[4] = {vgetq_lane_f64(r01, 0), vgetq_lane_f64(r01, 1),
                    vgetq_lane_f64(r23, 0), vgetq_lane_f64(r23, 1)};
  for (std::size_t j = 0; i + j < n; ++j)
    lane[j] += (x[i + j] * y[i + j]) * w[i + j];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

}  // namespace vfi::kernels::detail

#endif  // aarch64
