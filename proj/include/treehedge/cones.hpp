#pragma once

#include <vector>

#include "treehedge/lp.hpp"

namespace treehedge {

template <class S>
using Vec = std::vector<S>;

template <class S>
using Mat = std::vector<std::vector<S>>;  // row-major square for cost matrices

/// Solvency cone in generator (V-) representation. Market-built cones keep
/// their price vector and cost matrix so exchange-level bookkeeping stays
/// possible; raw-generator cones carry only the generators.
template <class S>
struct SolvencyCone {
    int dim = 0;
    Mat<S> generators;
    bool from_market = false;
    Vec<S> prices;  // market cones only
    Mat<S> costs;   // market cones only

    /// Market layout: the first `dim` generators are the unit vectors, then
    /// one exchange generator per ordered pair (i,j), i != j, row-major.
    int exchange_generator(int i, int j) const;
};

/// Positive polar in inequality (H-) form: y is a member iff y >= 0
/// componentwise and row . y >= 0 for every row.
template <class S>
struct PolarCone {
    int dim = 0;
    Mat<S> rows;
};

/// Exchange rate pi[i][j] = (S_j / S_i) * (1 + lambda[i][j]): units of asset i
/// paid per unit of asset j received.
template <class S>
Mat<S> exchange_rates(const Vec<S>& prices, const Mat<S>& costs);

/// Builds the cone {x : x + sum of affordable exchanges >= 0} as
/// R^d_+ + cone{ pi_ij e_i - e_j }.
template <class S>
SolvencyCone<S> cone_from_market(const Vec<S>& prices, const Mat<S>& costs);

/// Raw-generator cone. Validates nonzero generators and that every unit
/// vector lies in the cone (free disposal must hold).
template <class S>
SolvencyCone<S> cone_from_generators(int dim, Mat<S> generators);

template <class S>
PolarCone<S> polar_constraints(const SolvencyCone<S>& cone);

template <class S>
bool in_polar(const PolarCone<S>& polar, const Vec<S>& y, double tol = 0.0);

/// Membership x in cone{generators}: LP feasibility over nonnegative
/// combination weights. Exact in rational mode.
template <class S>
bool cone_contains(const SolvencyCone<S>& cone, const Vec<S>& x,
                   const lp::SolveOptions& options = {});

/// Basis of the lineality space K ∩ (-K): the generators whose negation stays
/// inside the cone span it, reduced to a maximal independent subset. Empty
/// basis means efficient frictions.
template <class S>
Mat<S> lineality_basis(const SolvencyCone<S>& cone,
                       const lp::SolveOptions& options = {});

/// Exact basis of the orthogonal complement of span(rows).
template <class S>
Mat<S> orthogonal_complement(int dim, const Mat<S>& rows);

/// Smallest c with c*direction - x in the cone; direction defaults to the
/// first asset. Throws Error(UnboundedBelow) when no finite minimum exists
/// (malformed generators).
template <class S>
S constitution_value(const SolvencyCone<S>& cone, const Vec<S>& x,
                     const lp::SolveOptions& options = {});

template <class S>
S constitution_value_along(const SolvencyCone<S>& cone, const Vec<S>& x,
                           const Vec<S>& direction,
                           const lp::SolveOptions& options = {});

/// All-pairs multiplicative shortest paths on a raw exchange-rate matrix.
/// Throws Error(CycleArbitrage) when a round trip multiplies to less than 1.
template <class S>
Mat<S> tighten_rates(const Mat<S>& rates);

/// Effective cost matrix: routing every transfer through the cheapest chain
/// of intermediate assets. Idempotent; leaves the cone unchanged.
template <class S>
Mat<S> tighten_costs(const Mat<S>& costs, const Vec<S>& prices);

}  // namespace treehedge
