#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace treehedge {

// Exact arbitrary-precision rational scalar. All reference-mode arithmetic in
// the library runs on this type; `double` is the sweep/approximation mode.
using Rational = mpq_class;

// Parses "p/q", integers ("-3"), and decimal literals ("1.25", "2.5e-1").
// Throws Error(SchemaError) on anything else, including zero denominators.
Rational rational_from_string(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string rational_to_string(const Rational& value);

inline double rational_to_double(const Rational& value) { return value.get_d(); }

}  // namespace treehedge
