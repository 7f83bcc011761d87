#include "treehedge/randomization.hpp"

#include <utility>

namespace treehedge {

namespace {

// E^q_t-style subtree aggregate: out(n) = weight(n) + sum_c p(c) out(c).
template <class S, class F>
Vec<S> subtree_aggregate(const EventTree<S>& tree, F&& weight) {
    Vec<S> out(tree.size(), S(0));
    for (int n = tree.size() - 1; n >= 0; --n) {
        out[n] = weight(n);
        for (int c : tree.children(n)) out[n] += tree.node(c).prob * out[c];
    }
    return out;
}

}  // namespace

template <class S>
TwoAssetBands<S> two_asset_bands(const EventTree<S>& tree, const MarketModel<S>& market) {
    check_market_shape(tree, market);
    if (market.assets != 2)
        fail(ErrorCode::NotTwoAsset, "two-asset representation requires exactly 2 assets");
    TwoAssetBands<S> bands;
    bands.spot.resize(tree.size());
    bands.mu.resize(tree.size());
    bands.lambda.resize(tree.size());
    for (int n = 0; n < tree.size(); ++n) {
        const auto& cone = market.cone(n);
        if (!cone.from_market)
            fail(ErrorCode::NotTwoAsset,
                 "two-asset representation requires market-built cones");
        if (cone.prices[0] != S(1))
            fail(ErrorCode::NotTwoAsset,
                 "two-asset representation requires the numeraire price to be 1");
        bands.spot[n] = cone.prices[1];
        bands.lambda[n] = cone.costs[0][1];
        // sale haircut: selling recovers 1/(1 + lambda21) per unit of spot
        bands.mu[n] = cone.costs[1][0] / (S(1) + cone.costs[1][0]);
    }
    return bands;
}

template <class S>
bool check_node_measure(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                        const NodeMeasure<S>& nm, double tol) {
    const int n = tree.size();
    if (static_cast<int>(nm.chi.size()) != n || static_cast<int>(nm.q.size()) != n ||
        static_cast<int>(nm.support.size()) != n)
        return false;
    S mass = S(0);
    for (int i = 0; i < n; ++i) {
        if (fuzzy_sign(nm.q[i], tol) < 0) return false;
        bool live = fuzzy_sign(nm.q[i], tol) > 0;
        if (static_cast<bool>(nm.support[i]) != live) return false;
        if (live) {
            if (fuzzy_sign(nm.chi[i] - (S(1) - bands.mu[i]), tol) < 0) return false;
            if (fuzzy_sign((S(1) + bands.lambda[i]) - nm.chi[i], tol) < 0) return false;
        } else if (fuzzy_sign(nm.chi[i], tol) != 0) {
            return false;
        }
        mass += tree.node_probability(i) * nm.q[i];
    }
    if (fuzzy_sign(mass - S(1), tol) != 0) return false;

    Vec<S> ones = subtree_aggregate(tree, [&](int i) -> S { return nm.q[i]; });
    Vec<S> priced = subtree_aggregate(
        tree, [&](int i) -> S { return nm.q[i] * nm.chi[i] * bands.spot[i]; });
    for (int i = 0; i < n; ++i) {
        S lo = bands.spot[i] * (S(1) - bands.mu[i]) * ones[i];
        S hi = bands.spot[i] * (S(1) + bands.lambda[i]) * ones[i];
        if (fuzzy_sign(priced[i] - lo, tol) < 0) return false;
        if (fuzzy_sign(hi - priced[i], tol) < 0) return false;
    }
    return true;
}

template <class S>
NodeMeasure<S> z_to_node_measure(const EventTree<S>& tree, const MarketModel<S>& market,
                                 const Mat<S>& z, const lp::SolveOptions& options) {
    TwoAssetBands<S> bands = two_asset_bands(tree, market);
    if (!is_consistent_dual(tree, market, z, options.feas_tol))
        fail(ErrorCode::OutsideDualCone, "process is not a consistent dual process");

    S total = S(0);
    for (int n = 0; n < tree.size(); ++n) total += tree.node_probability(n) * z[n][0];
    if (fuzzy_sign(total, options.feas_tol) == 0)
        fail(ErrorCode::ZeroFirstComponent,
             "first component of the dual process vanishes identically");

    NodeMeasure<S> nm;
    nm.chi.assign(tree.size(), S(0));
    nm.q.assign(tree.size(), S(0));
    nm.support.assign(tree.size(), 0);
    for (int n = 0; n < tree.size(); ++n) {
        const S& z1 = z[n][0];
        if (fuzzy_sign(z1, options.feas_tol) > 0) {
            nm.support[n] = 1;
            nm.q[n] = z1 / total;
            nm.chi[n] = (z[n][1] / bands.spot[n]) / z1;
        }
        // otherwise q = chi = 0 by the 0/0 convention
    }
    return nm;
}

template <class S>
DualProcess<S> node_measure_to_z(const EventTree<S>& tree, const MarketModel<S>& market,
                                 const NodeMeasure<S>& nm, const lp::SolveOptions& options) {
    TwoAssetBands<S> bands = two_asset_bands(tree, market);
    if (!check_node_measure(tree, bands, nm, options.feas_tol))
        fail(ErrorCode::NotInQ, "pair (chi, q) violates the node-measure constraints");
    DualProcess<S> process;
    process.z.assign(tree.size(), Vec<S>(2, S(0)));
    for (int n = 0; n < tree.size(); ++n) {
        process.z[n][0] = nm.q[n];
        process.z[n][1] = nm.chi[n] * nm.q[n] * bands.spot[n];
    }
    return process;
}

template <class S>
S node_measure_value(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                     const NodeMeasure<S>& nm, const Claim<S>& claim) {
    S value = S(0);
    for (int n = 0; n < tree.size(); ++n) {
        S payoff = claim.payoff[n][0] + nm.chi[n] * claim.payoff[n][1] * bands.spot[n];
        value += tree.node_probability(n) * nm.q[n] * payoff;
    }
    return value;
}

template <class S>
RandomizedStop<S> node_measure_to_randomized(const EventTree<S>& tree,
                                             const TwoAssetBands<S>& bands,
                                             const NodeMeasure<S>& nm, double tol) {
    if (!check_node_measure(tree, bands, nm, tol))
        fail(ErrorCode::NotInQ, "pair (chi, q) violates the node-measure constraints");

    // N(n) = E[sum of q over the subtree | n]; the density update divides by
    // the parent's one-step-ahead expectation D.
    Vec<S> tail = subtree_aggregate(tree, [&](int n) -> S { return nm.q[n]; });

    RandomizedStop<S> rs;
    rs.x.assign(tree.size(), S(0));
    rs.h.assign(tree.size(), S(0));
    rs.chi.assign(tree.size(), S(0));
    Vec<S> head(tree.size(), S(0));  // sum of X strictly before + at the node

    rs.h[tree.root()] = S(1);
    rs.x[tree.root()] = nm.q[tree.root()];
    head[tree.root()] = rs.x[tree.root()];

    for (int n = 0; n < tree.size(); ++n) {
        if (n != tree.root()) {
            int parent = tree.node(n).parent;
            S d_next = S(0);
            for (int c : tree.children(parent)) d_next += tree.node(c).prob * tail[c];
            if (fuzzy_sign(d_next, 0.0) != 0) {
                rs.h[n] = rs.h[parent] * tail[n] / d_next;
            } else {
                rs.h[n] = rs.h[parent];
            }
            if (fuzzy_sign(rs.h[n], 0.0) != 0) {
                rs.x[n] = nm.q[n] / rs.h[n];
            } else if (fuzzy_sign(rs.h[parent], 0.0) != 0) {
                // measure dies out here: park the residual exercise mass at
                // the entry node so the pathwise sum still closes to 1
                if (fuzzy_sign(tail[n], 0.0) != 0)
                    fail(ErrorCode::NotInQ, "q does not vanish on a dead subtree");
                rs.x[n] = S(1) - head[parent];
            } else {
                rs.x[n] = S(0);
            }
            head[n] = head[parent] + rs.x[n];
        }
        // in-band placeholder where q carries no mass; never enters any value
        rs.chi[n] = nm.support[n] ? nm.chi[n] : S(1);
    }
    return rs;
}

template <class S>
bool check_randomized(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                      const RandomizedStop<S>& rs, double tol) {
    const int n = tree.size();
    if (static_cast<int>(rs.x.size()) != n || static_cast<int>(rs.h.size()) != n ||
        static_cast<int>(rs.chi.size()) != n)
        return false;
    for (int i = 0; i < n; ++i) {
        if (fuzzy_sign(rs.x[i], tol) < 0) return false;
        if (fuzzy_sign(rs.h[i], tol) < 0) return false;
        if (fuzzy_sign(rs.chi[i] - (S(1) - bands.mu[i]), tol) < 0) return false;
        if (fuzzy_sign((S(1) + bands.lambda[i]) - rs.chi[i], tol) < 0) return false;
    }
    if (fuzzy_sign(rs.h[tree.root()] - S(1), tol) != 0) return false;
    for (int i = 0; i < n; ++i) {
        if (tree.is_leaf(i)) continue;
        S expect = S(0);
        for (int c : tree.children(i)) expect += tree.node(c).prob * rs.h[c];
        if (fuzzy_sign(rs.h[i] - expect, tol) != 0) return false;
    }

    // exercise mass closes to 1 on every path
    Vec<S> head(n, S(0));
    for (int i = 0; i < n; ++i) {
        int parent = tree.node(i).parent;
        head[i] = (parent < 0 ? S(0) : head[parent]) + rs.x[i];
    }
    for (int leaf : tree.leaves())
        if (fuzzy_sign(head[leaf] - S(1), tol) != 0) return false;

    // band sandwich, multiplied through by the density so nodes the measure
    // never reaches drop out instead of dividing by zero
    Vec<S> priced = subtree_aggregate(
        tree, [&](int i) -> S { return rs.h[i] * rs.x[i] * rs.chi[i] * bands.spot[i]; });
    for (int i = 0; i < n; ++i) {
        S xplus = S(1) - (tree.node(i).parent < 0 ? S(0) : head[tree.node(i).parent]);
        S lo = bands.spot[i] * (S(1) - bands.mu[i]) * xplus * rs.h[i];
        S hi = bands.spot[i] * (S(1) + bands.lambda[i]) * xplus * rs.h[i];
        if (fuzzy_sign(priced[i] - lo, tol) < 0) return false;
        if (fuzzy_sign(hi - priced[i], tol) < 0) return false;
    }
    return true;
}

template <class S>
NodeMeasure<S> randomized_to_node_measure(const EventTree<S>& tree,
                                          const TwoAssetBands<S>& bands,
                                          const RandomizedStop<S>& rs, double tol) {
    if (!check_randomized(tree, bands, rs, tol))
        fail(ErrorCode::NotApproximateMartingaleMeasure,
             "triple (X, H, chi) violates the randomized-stop constraints");
    S total = S(0);
    for (int n = 0; n < tree.size(); ++n)
        total += tree.node_probability(n) * rs.x[n] * rs.h[n];
    if (fuzzy_sign(total, 0.0) == 0)
        fail(ErrorCode::NotApproximateMartingaleMeasure, "X carries no mass under Q");

    NodeMeasure<S> nm;
    nm.chi.assign(tree.size(), S(0));
    nm.q.assign(tree.size(), S(0));
    nm.support.assign(tree.size(), 0);
    for (int n = 0; n < tree.size(); ++n) {
        nm.q[n] = rs.x[n] * rs.h[n] / total;
        if (fuzzy_sign(nm.q[n], 0.0) > 0) {
            nm.support[n] = 1;
            nm.chi[n] = rs.chi[n];
        }
    }
    return nm;
}

template <class S>
S randomized_value(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                   const RandomizedStop<S>& rs, const Claim<S>& claim) {
    S value = S(0);
    for (int n = 0; n < tree.size(); ++n) {
        S payoff = claim.payoff[n][0] + rs.chi[n] * claim.payoff[n][1] * bands.spot[n];
        value += tree.node_probability(n) * rs.h[n] * rs.x[n] * payoff;
    }
    return value;
}

#define TREEHEDGE_INSTANTIATE_RANDOMIZATION(S)                                            \
    template struct TwoAssetBands<S>;                                                     \
    template TwoAssetBands<S> two_asset_bands(const EventTree<S>&, const MarketModel<S>&);\
    template bool check_node_measure(const EventTree<S>&, const TwoAssetBands<S>&,        \
                                     const NodeMeasure<S>&, double);                      \
    template NodeMeasure<S> z_to_node_measure(const EventTree<S>&, const MarketModel<S>&, \
                                              const Mat<S>&, const lp::SolveOptions&);    \
    template DualProcess<S> node_measure_to_z(const EventTree<S>&, const MarketModel<S>&, \
                                              const NodeMeasure<S>&,                      \
                                              const lp::SolveOptions&);                   \
    template S node_measure_value(const EventTree<S>&, const TwoAssetBands<S>&,           \
                                  const NodeMeasure<S>&, const Claim<S>&);                \
    template RandomizedStop<S> node_measure_to_randomized(                                \
        const EventTree<S>&, const TwoAssetBands<S>&, const NodeMeasure<S>&, double);     \
    template bool check_randomized(const EventTree<S>&, const TwoAssetBands<S>&,          \
                                   const RandomizedStop<S>&, double);                     \
    template NodeMeasure<S> randomized_to_node_measure(                                   \
        const EventTree<S>&, const TwoAssetBands<S>&, const RandomizedStop<S>&, double);  \
    template S randomized_value(const EventTree<S>&, const TwoAssetBands<S>&,             \
                                const RandomizedStop<S>&, const Claim<S>&);

TREEHEDGE_INSTANTIATE_RANDOMIZATION(Rational)
TREEHEDGE_INSTANTIATE_RANDOMIZATION(double)

#undef TREEHEDGE_INSTANTIATE_RANDOMIZATION

}  // namespace treehedge
