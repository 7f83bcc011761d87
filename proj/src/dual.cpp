#include "treehedge/dual.hpp"

#include <utility>

namespace treehedge {

namespace {

template <class S>
int col_of(int node, int asset, int d) {
    return node * d + asset;
}

// Polar rows for Z(n) and for the forward aggregate, the latter scaled by
// P(n) so coefficients stay polynomial in the branch probabilities:
// sum over descendants m of P(m) g . Z(m) >= 0.
template <class S>
void add_dual_cone_rows(const EventTree<S>& tree, const MarketModel<S>& market,
                        lp::LpProblem<S>& p, int total_cols) {
    const int d = market.assets;
    for (int n = 0; n < tree.size(); ++n) {
        for (const auto& g : market.cone(n).generators) {
            lp::LpRow<S> row;
            row.coeffs.assign(total_cols, S(0));
            for (int k = 0; k < d; ++k) row.coeffs[col_of<S>(n, k, d)] = g[k];
            row.rel = lp::Relation::GreaterEq;
            row.rhs = S(0);
            p.rows.push_back(std::move(row));
        }
        for (const auto& g : market.cone(n).generators) {
            lp::LpRow<S> row;
            row.coeffs.assign(total_cols, S(0));
            for (int m : tree.subtree(n)) {
                const S& pm = tree.node_probability(m);
                for (int k = 0; k < d; ++k)
                    row.coeffs[col_of<S>(m, k, d)] += pm * g[k];
            }
            row.rel = lp::Relation::GreaterEq;
            row.rhs = S(0);
            p.rows.push_back(std::move(row));
        }
    }
}

}  // namespace

template <class S>
Mat<S> compute_zbar(const EventTree<S>& tree, const Mat<S>& z) {
    const int d = z.empty() ? 0 : static_cast<int>(z[0].size());
    Mat<S> zbar(tree.size(), Vec<S>(d, S(0)));
    for (int n = tree.size() - 1; n >= 0; --n) {
        for (int k = 0; k < d; ++k) zbar[n][k] = z[n][k];
        for (int c : tree.children(n))
            for (int k = 0; k < d; ++k) zbar[n][k] += tree.node(c).prob * zbar[c][k];
    }
    return zbar;
}

// Normalization lemma: the price along a nonnegative nonzero direction is the
// support-function form of the dual inequality E[sum claim_t . Z_t] <= Zbar_0 . x.
// It is well posed because the unit vectors are interior to every cone, so
// y . direction > 0 for every nonzero polar vector y, and the all-zero
// process contributes value 0; scaling Zbar_0 . direction to 1 loses nothing.
template <class S>
DualPriceResult<S> dual_price_along(const EventTree<S>& tree, const MarketModel<S>& market,
                                    const Claim<S>& claim, const Vec<S>& direction,
                                    const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    check_claim_shape(tree, market, claim);
    if (static_cast<int>(direction.size()) != market.assets)
        fail(ErrorCode::DimensionMismatch, "direction has wrong dimension");

    const int d = market.assets;
    const int total = tree.size() * d;
    lp::LpProblem<S> p;
    p.sense = lp::Sense::Maximize;
    p.objective.assign(total, S(0));
    for (int n = 0; n < tree.size(); ++n)
        for (int k = 0; k < d; ++k)
            p.objective[col_of<S>(n, k, d)] = tree.node_probability(n) * claim.payoff[n][k];

    add_dual_cone_rows(tree, market, p, total);

    lp::LpRow<S> norm;
    norm.coeffs.assign(total, S(0));
    for (int n = 0; n < tree.size(); ++n)
        for (int k = 0; k < d; ++k)
            norm.coeffs[col_of<S>(n, k, d)] = tree.node_probability(n) * direction[k];
    norm.rel = lp::Relation::Equal;
    norm.rhs = S(1);
    p.rows.push_back(std::move(norm));

    auto out = lp::solve_lp(p, options);
    if (out.status == lp::LpStatus::Infeasible)
        fail(ErrorCode::UnboundedBelow,
             "no normalized dual process exists; the market admits arbitrage inside a "
             "single cone");
    if (out.status == lp::LpStatus::Unbounded)
        fail(ErrorCode::InfeasibleClaim,
             "dual program unbounded; claim cannot be dominated (malformed cone)");

    DualPriceResult<S> result;
    result.value = out.value;
    result.process.z.assign(tree.size(), Vec<S>(d, S(0)));
    for (int n = 0; n < tree.size(); ++n)
        for (int k = 0; k < d; ++k)
            result.process.z[n][k] = out.solution[col_of<S>(n, k, d)];
    return result;
}

template <class S>
DualPriceResult<S> dual_price(const EventTree<S>& tree, const MarketModel<S>& market,
                              const Claim<S>& claim, const lp::SolveOptions& options) {
    return dual_price_along(tree, market, claim, first_asset_direction<S>(market.assets),
                            options);
}

template <class S>
bool is_consistent_dual(const EventTree<S>& tree, const MarketModel<S>& market,
                        const Mat<S>& z, double tol) {
    check_market_shape(tree, market);
    if (static_cast<int>(z.size()) != tree.size()) return false;
    for (const auto& v : z)
        if (static_cast<int>(v.size()) != market.assets) return false;
    Mat<S> zbar = compute_zbar(tree, z);
    for (int n = 0; n < tree.size(); ++n) {
        PolarCone<S> polar = polar_constraints(market.cone(n));
        if (!in_polar(polar, z[n], tol)) return false;
        if (!in_polar(polar, zbar[n], tol)) return false;
    }
    return true;
}

template <class S>
bool is_martingale_cps(const EventTree<S>& tree, const MarketModel<S>& market,
                       const Mat<S>& z, double tol) {
    check_market_shape(tree, market);
    if (static_cast<int>(z.size()) != tree.size()) return false;
    for (int n = 0; n < tree.size(); ++n) {
        if (static_cast<int>(z[n].size()) != market.assets) return false;
        if (!in_polar(polar_constraints(market.cone(n)), z[n], tol)) return false;
        if (tree.is_leaf(n)) continue;
        for (int k = 0; k < market.assets; ++k) {
            S expect = S(0);
            for (int c : tree.children(n)) expect += tree.node(c).prob * z[c][k];
            if (fuzzy_sign(z[n][k] - expect, tol) != 0) return false;
        }
    }
    return true;
}

template <class S>
StrictPositivityResult<S> strictly_positive_cps(const EventTree<S>& tree,
                                                const MarketModel<S>& market,
                                                const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    const int d = market.assets;
    const int total = tree.size() * d + 1;  // trailing epsilon column
    const int eps_col = total - 1;

    lp::LpProblem<S> p;
    p.sense = lp::Sense::Maximize;
    p.objective.assign(total, S(0));
    p.objective[eps_col] = S(1);

    add_dual_cone_rows(tree, market, p, total);

    for (int n = 0; n < tree.size(); ++n)
        for (int k = 0; k < d; ++k) {
            lp::LpRow<S> row;
            row.coeffs.assign(total, S(0));
            row.coeffs[col_of<S>(n, k, d)] = S(1);
            row.coeffs[eps_col] = S(-1);
            row.rel = lp::Relation::GreaterEq;
            row.rhs = S(0);
            p.rows.push_back(std::move(row));
        }

    lp::LpRow<S> guard;  // pins the scale so epsilon is meaningful
    guard.coeffs.assign(total, S(0));
    for (int n = 0; n < tree.size(); ++n) guard.coeffs[col_of<S>(n, 0, d)] = S(1);
    guard.rel = lp::Relation::Equal;
    guard.rhs = S(1);
    p.rows.push_back(std::move(guard));

    StrictPositivityResult<S> result;
    auto out = lp::solve_lp(p, options);
    if (out.status != lp::LpStatus::Optimal) return result;  // epsilon stays 0
    result.epsilon = out.value;
    if (fuzzy_sign(out.value, options.feas_tol) > 0) {
        DualProcess<S> process;
        process.z.assign(tree.size(), Vec<S>(d, S(0)));
        for (int n = 0; n < tree.size(); ++n)
            for (int k = 0; k < d; ++k)
                process.z[n][k] = out.solution[col_of<S>(n, k, d)];
        result.process = std::move(process);
    }
    return result;
}

template <class S>
std::optional<std::pair<S, Mat<S>>> stopped_cps_value(const EventTree<S>& tree,
                                                      const MarketModel<S>& market,
                                                      const Claim<S>& claim,
                                                      const StoppingTime& st,
                                                      const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    check_claim_shape(tree, market, claim);
    if (!is_valid_stopping_time(tree, st))
        fail(ErrorCode::ValidationError, "invalid stopping time");

    const int d = market.assets;
    const int total = tree.size() * d;
    lp::LpProblem<S> p;
    p.sense = lp::Sense::Maximize;
    p.objective.assign(total, S(0));
    for (int n = 0; n < tree.size(); ++n) {
        if (!st.stop[n]) continue;
        for (int k = 0; k < d; ++k)
            p.objective[col_of<S>(n, k, d)] = tree.node_probability(n) * claim.payoff[n][k];
    }

    for (int n = 0; n < tree.size(); ++n)
        for (const auto& g : market.cone(n).generators) {
            lp::LpRow<S> row;
            row.coeffs.assign(total, S(0));
            for (int k = 0; k < d; ++k) row.coeffs[col_of<S>(n, k, d)] = g[k];
            row.rel = lp::Relation::GreaterEq;
            row.rhs = S(0);
            p.rows.push_back(std::move(row));
        }
    for (int n = 0; n < tree.size(); ++n) {
        if (tree.is_leaf(n)) continue;
        for (int k = 0; k < d; ++k) {
            lp::LpRow<S> row;
            row.coeffs.assign(total, S(0));
            row.coeffs[col_of<S>(n, k, d)] = S(1);
            for (int c : tree.children(n))
                row.coeffs[col_of<S>(c, k, d)] = -tree.node(c).prob;
            row.rel = lp::Relation::Equal;
            row.rhs = S(0);
            p.rows.push_back(std::move(row));
        }
    }
    lp::LpRow<S> norm;
    norm.coeffs.assign(total, S(0));
    norm.coeffs[col_of<S>(tree.root(), 0, d)] = S(1);
    norm.rel = lp::Relation::Equal;
    norm.rhs = S(1);
    p.rows.push_back(std::move(norm));

    auto out = lp::solve_lp(p, options);
    if (out.status == lp::LpStatus::Infeasible) return std::nullopt;
    if (out.status == lp::LpStatus::Unbounded)
        fail(ErrorCode::InfeasibleClaim, "stopped dual program unbounded (malformed cone)");
    Mat<S> z(tree.size(), Vec<S>(d, S(0)));
    for (int n = 0; n < tree.size(); ++n)
        for (int k = 0; k < d; ++k) z[n][k] = out.solution[col_of<S>(n, k, d)];
    return std::make_pair(out.value, std::move(z));
}

template <class S>
ThetaResult<S> theta_price(const EventTree<S>& tree, const MarketModel<S>& market,
                           const Claim<S>& claim, std::uint64_t cap,
                           const lp::SolveOptions& options) {
    ThetaResult<S> result;
    result.stopping_time_count = count_stopping_times(tree, cap);
    if (result.stopping_time_count > cap)
        fail(ErrorCode::EnumerationCapExceeded,
             "stopping-time enumeration exceeds the cap of " + std::to_string(cap));
    auto rules = enumerate_stopping_times(tree, cap);
    for (const auto& st : rules) {
        auto stopped = stopped_cps_value(tree, market, claim, st, options);
        if (!stopped.has_value()) return result;  // no consistent price system at all
        if (!result.has_value || stopped->first > result.value) {
            result.has_value = true;
            result.value = stopped->first;
            result.best = st;
            result.best_z = std::move(stopped->second);
        }
    }
    return result;
}

template <class S>
GapReport<S> duality_gap_report(const EventTree<S>& tree, const MarketModel<S>& market,
                                const Claim<S>& claim, std::uint64_t theta_cap,
                                const lp::SolveOptions& options) {
    GapReport<S> report;
    auto primal = superhedge_price(tree, market, claim, options);
    auto dual = dual_price(tree, market, claim, options);
    report.h_primal = primal.price;
    report.h_dual = dual.value;
    report.plan = std::move(primal.plan);
    report.dual = std::move(dual.process);
    if constexpr (is_exact_scalar_v<S>) {
        report.primal_dual_equal = report.h_primal == report.h_dual;
    } else {
        double scale = 1.0 + std::fabs(report.h_primal);
        report.primal_dual_equal = std::fabs(report.h_primal - report.h_dual) <= 1e-7 * scale;
    }
    report.stopping_time_count = count_stopping_times(tree, theta_cap);
    if (report.stopping_time_count <= theta_cap) {
        auto theta = theta_price(tree, market, claim, theta_cap, options);
        if (theta.has_value) {
            report.theta_available = true;
            report.h_theta = theta.value;
            report.gap = report.h_primal - report.h_theta;
        }
    }
    return report;
}

template <class S>
Claim<S> build_counterexample_claim(const EventTree<S>& tree, const MarketModel<S>& market,
                                    const Vec<S>& x, const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    if (static_cast<int>(x.size()) != market.assets)
        fail(ErrorCode::DimensionMismatch, "endowment has wrong dimension");
    S c0 = constitution_value(market.cone(tree.root()), x, options);
    Claim<S> claim = zero_claim(tree, market.assets);
    claim.payoff[tree.root()][0] = c0;
    for (int n = 0; n < tree.size(); ++n)
        if (tree.node(n).time > 0) claim.payoff[n] = x;
    return claim;
}

template <class S>
CounterexampleConditions check_counterexample_conditions(const EventTree<S>& tree,
                                                            const MarketModel<S>& market,
                                                            const Vec<S>& x,
                                                            const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    if (static_cast<int>(x.size()) != market.assets)
        fail(ErrorCode::DimensionMismatch, "endowment has wrong dimension");
    const int d = market.assets;
    const auto& root_cone = market.cone(tree.root());
    S c0 = constitution_value(root_cone, x, options);

    CounterexampleConditions conds;
    Vec<S> y(d);
    for (int k = 0; k < d; ++k) y[k] = x[k] - (k == 0 ? c0 : S(0));
    conds.cond_ii = !cone_contains(root_cone, y, options);

    bool efficient = lineality_basis(root_cone, options).empty();
    bool x_not_scaled_numeraire = false;
    for (int k = 0; k < d; ++k)
        if (fuzzy_sign(x[k] - (k == 0 ? c0 : S(0)), 0.0) != 0) x_not_scaled_numeraire = true;
    bool rises = false;
    for (int n = 0; n < tree.size(); ++n) {
        if (tree.node(n).time != 1) continue;
        if (fuzzy_sign(constitution_value(market.cone(n), x, options) - c0,
                       options.feas_tol) > 0) {
            rises = true;
            break;
        }
    }
    conds.cond_i_sufficient = efficient && x_not_scaled_numeraire && rises;
    return conds;
}

template <class S>
bool check_null_strategy_property(const EventTree<S>& tree, const MarketModel<S>& market,
                                  const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    const int d = market.assets;

    std::vector<int> weight_base(tree.size(), 0);
    int total = 0;
    for (int n = 0; n < tree.size(); ++n) {
        weight_base[n] = total;
        total += static_cast<int>(market.cone(n).generators.size());
    }

    // shared constraint block: the transfers along every root-to-leaf path
    // cancel exactly
    std::vector<lp::LpRow<S>> path_rows;
    for (int leaf : tree.leaves()) {
        for (int k = 0; k < d; ++k) {
            lp::LpRow<S> row;
            row.coeffs.assign(total, S(0));
            for (int m = leaf; m >= 0; m = tree.node(m).parent) {
                const auto& gens = market.cone(m).generators;
                for (std::size_t g = 0; g < gens.size(); ++g)
                    row.coeffs[weight_base[m] + static_cast<int>(g)] += gens[g][k];
            }
            row.rel = lp::Relation::Equal;
            row.rhs = S(0);
            path_rows.push_back(std::move(row));
        }
    }

    for (int n = 0; n < tree.size(); ++n) {
        const auto& cone = market.cone(n);
        Mat<S> lineality = lineality_basis(cone, options);
        Mat<S> complement = orthogonal_complement(d, lineality);
        for (const auto& w : complement) {
            for (int sign = -1; sign <= 1; sign += 2) {
                lp::LpProblem<S> p;
                p.sense = lp::Sense::Maximize;
                p.objective.assign(total, S(0));
                const auto& gens = cone.generators;
                for (std::size_t g = 0; g < gens.size(); ++g) {
                    S dot = S(0);
                    for (int k = 0; k < d; ++k) dot += w[k] * gens[g][k];
                    p.objective[weight_base[n] + static_cast<int>(g)] = S(-sign) * dot;
                }
                p.rows = path_rows;
                p.bounds.assign(total, lp::VarBound<S>{S(0), S(1)});
                auto out = lp::solve_lp(p, options);
                if (out.status != lp::LpStatus::Optimal)
                    fail(ErrorCode::ValidationError,
                         "null-strategy check LP did not solve to optimality");
                if (fuzzy_sign(out.value, options.feas_tol) > 0) return false;
            }
        }
    }
    return true;
}

#define TREEHEDGE_INSTANTIATE_DUAL(S)                                                      \
    template Mat<S> compute_zbar(const EventTree<S>&, const Mat<S>&);                      \
    template DualPriceResult<S> dual_price_along(const EventTree<S>&,                      \
                                                 const MarketModel<S>&, const Claim<S>&,   \
                                                 const Vec<S>&, const lp::SolveOptions&);  \
    template DualPriceResult<S> dual_price(const EventTree<S>&, const MarketModel<S>&,     \
                                           const Claim<S>&, const lp::SolveOptions&);      \
    template bool is_consistent_dual(const EventTree<S>&, const MarketModel<S>&,           \
                                     const Mat<S>&, double);                               \
    template bool is_martingale_cps(const EventTree<S>&, const MarketModel<S>&,            \
                                    const Mat<S>&, double);                                \
    template StrictPositivityResult<S> strictly_positive_cps(                              \
        const EventTree<S>&, const MarketModel<S>&, const lp::SolveOptions&);              \
    template std::optional<std::pair<S, Mat<S>>> stopped_cps_value(                        \
        const EventTree<S>&, const MarketModel<S>&, const Claim<S>&, const StoppingTime&,  \
        const lp::SolveOptions&);                                                          \
    template ThetaResult<S> theta_price(const EventTree<S>&, const MarketModel<S>&,        \
                                        const Claim<S>&, std::uint64_t,                    \
                                        const lp::SolveOptions&);                          \
    template GapReport<S> duality_gap_report(const EventTree<S>&, const MarketModel<S>&,   \
                                             const Claim<S>&, std::uint64_t,               \
                                             const lp::SolveOptions&);                     \
    template Claim<S> build_counterexample_claim(const EventTree<S>&,                      \
                                                 const MarketModel<S>&, const Vec<S>&,     \
                                                 const lp::SolveOptions&);                 \
    template CounterexampleConditions check_counterexample_conditions(                  \
        const EventTree<S>&, const MarketModel<S>&, const Vec<S>&,                         \
        const lp::SolveOptions&);                                                          \
    template bool check_null_strategy_property(const EventTree<S>&, const MarketModel<S>&, \
                                               const lp::SolveOptions&);

TREEHEDGE_INSTANTIATE_DUAL(Rational)
TREEHEDGE_INSTANTIATE_DUAL(double)

#undef TREEHEDGE_INSTANTIATE_DUAL

}  // namespace treehedge
