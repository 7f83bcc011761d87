#include "treehedge/kernels.hpp"

#if defined(TREEHEDGE_HAVE_NEON_KERNELS)

#include <arm_neon.h>

namespace treehedge::kernels::neon {

void axpy(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vx));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vx = vld1q_f64(x + i);
        vst1q_f64(x + i, vmulq_f64(va, vx));
    }
    for (; i < n; ++i) x[i] *= a;
}

}  // namespace treehedge::kernels::neon

#endif
