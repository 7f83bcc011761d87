#pragma once

#include <cmath>
#include <type_traits>

#include "treehedge/rational.hpp"

namespace treehedge {

// The whole pipeline is generic over the scalar: Rational gives the exact
// reference semantics, double is the tolerance-based sweep mode. These helpers
// centralize the places where the two behave differently.

template <class S>
inline constexpr bool is_exact_scalar_v = std::is_same_v<S, Rational>;

template <class S>
S scalar_from_rational(const Rational& value) {
    if constexpr (is_exact_scalar_v<S>) {
        return value;
    } else {
        return rational_to_double(value);
    }
}

template <class S>
double scalar_to_double(const S& value) {
    if constexpr (is_exact_scalar_v<S>) {
        return rational_to_double(value);
    } else {
        return value;
    }
}

// Exact sign for rationals; sign with a dead zone of +/- tol for doubles.
template <class S>
int fuzzy_sign(const S& value, double tol) {
    if constexpr (is_exact_scalar_v<S>) {
        return sgn(value);
    } else {
        if (value > tol) return 1;
        if (value < -tol) return -1;
        return 0;
    }
}

template <class S>
S scalar_abs(const S& value) {
    if constexpr (is_exact_scalar_v<S>) {
        return abs(value);
    } else {
        return std::fabs(value);
    }
}

}  // namespace treehedge
