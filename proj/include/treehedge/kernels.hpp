#pragma once

#include <cstddef>

namespace treehedge::kernels {

// Dense double-precision row kernels used by the float-mode simplex. Each has
// a scalar reference implementation and, where the hardware offers them, SIMD
// variants selected once at startup. All variants are elementwise (one mul,
// one add per lane, no fused contractions), so every implementation produces
// bit-identical results; the equivalence tests assert exactly that.

enum class Isa {
    Scalar,
    Avx2,
    Neon,
};

const char* isa_name(Isa isa);

// Variant chosen by the runtime dispatcher for this process.
Isa active_isa();

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scale(double a, double* x, std::size_t n);

// Reference implementations, always available; the dispatched entry points
// above must match these bit for bit.
namespace ref {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace ref

#if defined(__x86_64__) || defined(_M_X64)
#define TREEHEDGE_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define TREEHEDGE_HAVE_NEON_KERNELS 1
namespace neon {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace treehedge::kernels
