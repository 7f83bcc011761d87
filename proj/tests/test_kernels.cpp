#include <doctest.h>

#include <random>
#include <vector>

#include "treehedge/kernels.hpp"

namespace tk = treehedge::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& eng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    std::vector<double> v(n);
    for (double& x : v) x = dist(eng);
    return v;
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference bit for bit") {
    std::mt19937_64 eng(20240711);
    std::uniform_real_distribution<double> coef(-8.0, 8.0);
    // sizes straddling every remainder lane of the widest vector
    for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(2), std::size_t(3),
                          std::size_t(4), std::size_t(5), std::size_t(7), std::size_t(8),
                          std::size_t(9), std::size_t(15), std::size_t(17),
                          std::size_t(1000)}) {
        for (int rep = 0; rep < 8; ++rep) {
            const double a = coef(eng);
            const auto x = random_vector(eng, n);
            auto y_ref = random_vector(eng, n);
            auto y_simd = y_ref;

            tk::ref::axpy(a, x.data(), y_ref.data(), n);
            tk::axpy(a, x.data(), y_simd.data(), n);
            REQUIRE(y_ref == y_simd);

            auto s_ref = x;
            auto s_simd = x;
            tk::ref::scale(a, s_ref.data(), n);
            tk::scale(a, s_simd.data(), n);
            REQUIRE(s_ref == s_simd);
        }
    }
}

#if defined(TREEHEDGE_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 variant agrees with the reference when the cpu has avx2") {
    if (!__builtin_cpu_supports("avx2")) return;
    std::mt19937_64 eng(7);
    for (std::size_t n : {std::size_t(6), std::size_t(64), std::size_t(129)}) {
        const auto x = random_vector(eng, n);
        auto y_ref = random_vector(eng, n);
        auto y_avx = y_ref;
        tk::ref::axpy(-3.25, x.data(), y_ref.data(), n);
        tk::avx2::axpy(-3.25, x.data(), y_avx.data(), n);
        CHECK(y_ref == y_avx);
        auto s_ref = x;
        auto s_avx = x;
        tk::ref::scale(0.1, s_ref.data(), n);
        tk::avx2::scale(0.1, s_avx.data(), n);
        CHECK(s_ref == s_avx);
    }
}
#endif

TEST_CASE("axpy with zero coefficient leaves the target untouched") {
    std::mt19937_64 eng(11);
    const auto x = random_vector(eng, 33);
    auto y = random_vector(eng, 33);
    const auto before = y;
    tk::axpy(0.0, x.data(), y.data(), y.size());
    CHECK(y == before);
}

TEST_CASE("an isa is reported") {
    CHECK(tk::isa_name(tk::active_isa()) != nullptr);
}
