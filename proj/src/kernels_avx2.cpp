#include "treehedge/kernels.hpp"

#if defined(TREEHEDGE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

namespace treehedge::kernels::avx2 {

// Plain mul + add (no FMA) so results are bit-identical to the scalar path.

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, vx));
    }
    for (; i < n; ++i) x[i] *= a;
}

}  // namespace treehedge::kernels::avx2

#endif
