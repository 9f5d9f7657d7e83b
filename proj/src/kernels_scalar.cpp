#include "vfi/kernels/reduce.hpp"

namespace vfi::kernels::detail {

// Reference block reductions. The lane structure mirrors a 4-wide SIMD
// register: lane j accumulates local elements j, j+4, j+8, ... and the
// horizontal combine is (l0+l2) + (l1+l3).

double block_wsum_scalar(const double* w, const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] += w[i] * x[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double block_wdot_scalar(const double* w, const double* x, const double* y,
                         std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] += (x[i] * y[i]) * w[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

}  // namespace vfi::kernels::detail
