#include "treehedge/cones.hpp"

#include <string>
#include <utility>

namespace treehedge {

namespace {

template <class S>
void validate_market_inputs(const Vec<S>& prices, const Mat<S>& costs) {
    const int d = static_cast<int>(prices.size());
    if (d < 2) fail(ErrorCode::DimensionMismatch, "market needs at least two assets");
    for (const S& p : prices)
        if (fuzzy_sign(p, 0.0) <= 0)
            fail(ErrorCode::NonPositivePrice, "prices must be strictly positive");
    if (static_cast<int>(costs.size()) != d)
        fail(ErrorCode::DimensionMismatch, "cost matrix must be d x d");
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(costs[i].size()) != d)
            fail(ErrorCode::DimensionMismatch, "cost matrix must be d x d");
        for (int j = 0; j < d; ++j) {
            if (fuzzy_sign(costs[i][j], 0.0) < 0)
                fail(ErrorCode::NegativeCost, "transaction costs must be nonnegative");
            if (i == j && fuzzy_sign(costs[i][j], 0.0) != 0)
                fail(ErrorCode::NegativeCost, "cost matrix diagonal must be zero");
        }
    }
}

template <class S>
bool is_zero_vector(const Vec<S>& v) {
    for (const S& x : v)
        if (fuzzy_sign(x, 0.0) != 0) return false;
    return true;
}

}  // namespace

template <class S>
int SolvencyCone<S>::exchange_generator(int i, int j) const {
    if (!from_market) fail(ErrorCode::NotMarketCone, "cone has no exchange layout");
    int slot = 0;
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            if (a == b) continue;
            if (a == i && b == j) return dim + slot;
            ++slot;
        }
    }
    fail(ErrorCode::DimensionMismatch, "exchange pair out of range");
}

template <class S>
Mat<S> exchange_rates(const Vec<S>& prices, const Mat<S>& costs) {
    validate_market_inputs(prices, costs);
    const int d = static_cast<int>(prices.size());
    Mat<S> pi(d, Vec<S>(d, S(1)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) pi[i][j] = (prices[j] / prices[i]) * (S(1) + costs[i][j]);
    return pi;
}

template <class S>
SolvencyCone<S> cone_from_market(const Vec<S>& prices, const Mat<S>& costs) {
    Mat<S> pi = exchange_rates(prices, costs);
    const int d = static_cast<int>(prices.size());
    SolvencyCone<S> cone;
    cone.dim = d;
    cone.from_market = true;
    cone.prices = prices;
    cone.costs = costs;
    cone.generators.reserve(d + d * (d - 1));
    for (int i = 0; i < d; ++i) {
        Vec<S> e(d, S(0));
        e[i] = S(1);
        cone.generators.push_back(std::move(e));
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            Vec<S> g(d, S(0));
            g[i] = pi[i][j];
            g[j] = S(-1);
            cone.generators.push_back(std::move(g));
        }
    }
    return cone;
}

template <class S>
SolvencyCone<S> cone_from_generators(int dim, Mat<S> generators) {
    if (dim < 1) fail(ErrorCode::DimensionMismatch, "cone dimension must be positive");
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != dim)
            fail(ErrorCode::DimensionMismatch, "generator has wrong dimension");
        if (is_zero_vector(g))
            fail(ErrorCode::ValidationError, "zero generator");
    }
    SolvencyCone<S> cone;
    cone.dim = dim;
    cone.from_market = false;
    cone.generators = std::move(generators);
    for (int i = 0; i < dim; ++i) {
        Vec<S> e(dim, S(0));
        e[i] = S(1);
        if (!cone_contains(cone, e))
            fail(ErrorCode::ValidationError,
                 "cone must contain every unit vector (free disposal)");
    }
    return cone;
}

template <class S>
PolarCone<S> polar_constraints(const SolvencyCone<S>& cone) {
    PolarCone<S> polar;
    polar.dim = cone.dim;
    polar.rows = cone.generators;
    return polar;
}

template <class S>
bool in_polar(const PolarCone<S>& polar, const Vec<S>& y, double tol) {
    if (static_cast<int>(y.size()) != polar.dim)
        fail(ErrorCode::DimensionMismatch, "vector dimension does not match polar cone");
    for (const S& v : y)
        if (fuzzy_sign(v, tol) < 0) return false;
    for (const auto& row : polar.rows) {
        S dot = S(0);
        for (int k = 0; k < polar.dim; ++k) dot += row[k] * y[k];
        if (fuzzy_sign(dot, tol) < 0) return false;
    }
    return true;
}

template <class S>
bool cone_contains(const SolvencyCone<S>& cone, const Vec<S>& x,
                   const lp::SolveOptions& options) {
    if (static_cast<int>(x.size()) != cone.dim)
        fail(ErrorCode::DimensionMismatch, "point dimension does not match cone");
    const int m = static_cast<int>(cone.generators.size());
    lp::LpProblem<S> p;
    p.objective.assign(m, S(0));
    p.rows.reserve(cone.dim);
    for (int k = 0; k < cone.dim; ++k) {
        lp::LpRow<S> row;
        row.coeffs.resize(m);
        for (int g = 0; g < m; ++g) row.coeffs[g] = cone.generators[g][k];
        row.rel = lp::Relation::Equal;
        row.rhs = x[k];
        p.rows.push_back(std::move(row));
    }
    return lp::solve_lp(p, options).status == lp::LpStatus::Optimal;
}

template <class S>
Mat<S> lineality_basis(const SolvencyCone<S>& cone, const lp::SolveOptions& options) {
    Mat<S> two_sided;
    for (const auto& g : cone.generators) {
        Vec<S> neg(cone.dim);
        for (int k = 0; k < cone.dim; ++k) neg[k] = -g[k];
        if (cone_contains(cone, neg, options)) two_sided.push_back(g);
    }
    // maximal independent subset by Gaussian elimination
    Mat<S> basis;
    Mat<S> reduced;
    for (const auto& g : two_sided) {
        Vec<S> v = g;
        for (const auto& r : reduced) {
            int lead = 0;
            while (lead < cone.dim && fuzzy_sign(r[lead], 0.0) == 0) ++lead;
            if (lead == cone.dim || fuzzy_sign(v[lead], 0.0) == 0) continue;
            S f = v[lead] / r[lead];
            for (int k = 0; k < cone.dim; ++k) v[k] -= f * r[k];
        }
        if (!is_zero_vector(v)) {
            reduced.push_back(v);
            basis.push_back(g);
        }
    }
    return basis;
}

template <class S>
Mat<S> orthogonal_complement(int dim, const Mat<S>& rows) {
    // Row-reduce, then read the null space off the free columns.
    Mat<S> r = rows;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < dim && rank < static_cast<int>(r.size()); ++col) {
        int sel = -1;
        for (int i = rank; i < static_cast<int>(r.size()); ++i)
            if (fuzzy_sign(r[i][col], 0.0) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(r[rank], r[sel]);
        S inv = S(1) / r[rank][col];
        for (int k = 0; k < dim; ++k) r[rank][k] *= inv;
        for (int i = 0; i < static_cast<int>(r.size()); ++i) {
            if (i == rank) continue;
            S f = r[i][col];
            if (fuzzy_sign(f, 0.0) == 0) continue;
            for (int k = 0; k < dim; ++k) r[i][k] -= f * r[rank][k];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    Mat<S> basis;
    std::vector<bool> is_pivot(dim, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int col = 0; col < dim; ++col) {
        if (is_pivot[col]) continue;
        Vec<S> v(dim, S(0));
        v[col] = S(1);
        for (int i = 0; i < rank; ++i) v[pivot_col[i]] = -r[i][col];
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class S>
S constitution_value_along(const SolvencyCone<S>& cone, const Vec<S>& x,
                           const Vec<S>& direction, const lp::SolveOptions& options) {
    if (static_cast<int>(x.size()) != cone.dim ||
        static_cast<int>(direction.size()) != cone.dim)
        fail(ErrorCode::DimensionMismatch, "vector dimension does not match cone");
    const int m = static_cast<int>(cone.generators.size());
    // min c : c*direction - x = sum w_g g, w >= 0, c free
    lp::LpProblem<S> p;
    p.objective.assign(1 + m, S(0));
    p.objective[0] = S(1);
    p.bounds.assign(1 + m, lp::VarBound<S>{});
    p.bounds[0] = lp::VarBound<S>{std::nullopt, std::nullopt};
    for (int k = 0; k < cone.dim; ++k) {
        lp::LpRow<S> row;
        row.coeffs.assign(1 + m, S(0));
        row.coeffs[0] = direction[k];
        for (int g = 0; g < m; ++g) row.coeffs[1 + g] = -cone.generators[g][k];
        row.rel = lp::Relation::Equal;
        row.rhs = x[k];
        p.rows.push_back(std::move(row));
    }
    auto out = lp::solve_lp(p, options);
    if (out.status == lp::LpStatus::Unbounded)
        fail(ErrorCode::UnboundedBelow,
             "constitution value unbounded below; cone generators are malformed");
    if (out.status == lp::LpStatus::Infeasible)
        fail(ErrorCode::UnboundedBelow,
             "no multiple of the direction dominates the position; direction is not "
             "interior to the cone");
    return out.value;
}

template <class S>
S constitution_value(const SolvencyCone<S>& cone, const Vec<S>& x,
                     const lp::SolveOptions& options) {
    Vec<S> e1(cone.dim, S(0));
    e1[0] = S(1);
    return constitution_value_along(cone, x, e1, options);
}

template <class S>
Mat<S> tighten_rates(const Mat<S>& rates) {
    const int d = static_cast<int>(rates.size());
    for (const auto& row : rates)
        if (static_cast<int>(row.size()) != d)
            fail(ErrorCode::DimensionMismatch, "rate matrix must be square");
    Mat<S> r = rates;
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                S via = r[i][k] * r[k][j];
                if (via < r[i][j]) r[i][j] = via;
            }
    for (int i = 0; i < d; ++i)
        if (r[i][i] < S(1))
            fail(ErrorCode::CycleArbitrage,
                 "exchange cycle through asset " + std::to_string(i) +
                     " multiplies to less than one");
    return r;
}

template <class S>
Mat<S> tighten_costs(const Mat<S>& costs, const Vec<S>& prices) {
    Mat<S> pi = exchange_rates(prices, costs);
    Mat<S> tightened = tighten_rates(pi);
    const int d = static_cast<int>(prices.size());
    Mat<S> out(d, Vec<S>(d, S(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) out[i][j] = tightened[i][j] * prices[i] / prices[j] - S(1);
    return out;
}

#define TREEHEDGE_INSTANTIATE_CONES(S)                                                  \
    template struct SolvencyCone<S>;                                                    \
    template Mat<S> exchange_rates(const Vec<S>&, const Mat<S>&);                       \
    template SolvencyCone<S> cone_from_market(const Vec<S>&, const Mat<S>&);            \
    template SolvencyCone<S> cone_from_generators(int, Mat<S>);                         \
    template PolarCone<S> polar_constraints(const SolvencyCone<S>&);                    \
    template bool in_polar(const PolarCone<S>&, const Vec<S>&, double);                 \
    template bool cone_contains(const SolvencyCone<S>&, const Vec<S>&,                  \
                                const lp::SolveOptions&);                               \
    template Mat<S> lineality_basis(const SolvencyCone<S>&, const lp::SolveOptions&);   \
    template Mat<S> orthogonal_complement(int, const Mat<S>&);                          \
    template S constitution_value(const SolvencyCone<S>&, const Vec<S>&,                \
                                  const lp::SolveOptions&);                             \
    template S constitution_value_along(const SolvencyCone<S>&, const Vec<S>&,          \
                                        const Vec<S>&, const lp::SolveOptions&);        \
    template Mat<S> tighten_rates(const Mat<S>&);                                       \
    template Mat<S> tighten_costs(const Mat<S>&, const Vec<S>&);

TREEHEDGE_INSTANTIATE_CONES(Rational)
TREEHEDGE_INSTANTIATE_CONES(double)

#undef TREEHEDGE_INSTANTIATE_CONES

}  // namespace treehedge
