#include "treehedge/kernels.hpp"

namespace treehedge::kernels {

namespace ref {

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace ref

namespace {

using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScaleFn = void (*)(double, double*, std::size_t);

struct Dispatch {
    Isa isa = Isa::Scalar;
    AxpyFn axpy = &ref::axpy;
    ScaleFn scale = &ref::scale;
};

Dispatch select() {
    Dispatch d;
#if defined(TREEHEDGE_HAVE_AVX2_KERNELS)
    if (__builtin_cpu_supports("avx2")) {
        d.isa = Isa::Avx2;
        d.axpy = &avx2::axpy;
        d.scale = &avx2::scale;
        return d;
    }
#endif
#if defined(TREEHEDGE_HAVE_NEON_KERNELS)
    d.isa = Isa::Neon;
    d.axpy = &neon::axpy;
    d.scale = &neon::scale;
    return d;
#endif
    return d;
}

const Dispatch& dispatch() {
    static const Dispatch d = select();
    return d;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

Isa active_isa() { return dispatch().isa; }

void axpy(double a, const double* x, double* y, std::size_t n) {
    dispatch().axpy(a, x, y, n);
}

void scale(double a, double* x, std::size_t n) {
    dispatch().scale(a, x, n);
}

}  // namespace treehedge::kernels
