#pragma once

#include "treehedge/dual.hpp"

namespace treehedge {

/// Two-asset view of a market: the first asset is the numeraire with price
/// identically 1, the second trades inside the per-node band
/// [spot*(1-mu), spot*(1+lambda)]. Built from market cones; rejects anything
/// else.
template <class S>
struct TwoAssetBands {
    Vec<S> spot;    // price of the risky asset per node
    Vec<S> mu;      // per-node sale haircut, in [0,1)
    Vec<S> lambda;  // per-node purchase markup, >= 0
};

template <class S>
TwoAssetBands<S> two_asset_bands(const EventTree<S>& tree, const MarketModel<S>& market);

/// Measure over (node, time) pairs paired with an exercise-cost factor chi.
/// chi is stored as 0 outside the support of q (the 0/0 convention); the band
/// constraint applies on the support only.
template <class S>
struct NodeMeasure {
    Vec<S> chi;
    Vec<S> q;
    std::vector<char> support;  // q > 0
};

/// Randomized exercise plus a change of measure: X >= 0 sums to 1 along every
/// path, H is a nonnegative martingale density with H(root) = 1 (it vanishes
/// only on subtrees that carry no exercise mass), chi stays inside the band
/// everywhere.
template <class S>
struct RandomizedStop {
    Vec<S> x;
    Vec<S> h;
    Vec<S> chi;
};

template <class S>
bool check_node_measure(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                        const NodeMeasure<S>& nm, double tol = 0.0);

template <class S>
bool check_randomized(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                      const RandomizedStop<S>& rs, double tol = 0.0);

/// chi = (Z2/spot) / Z1 and q = Z1 / E[sum Z1], with 0/0 read as 0. Requires
/// Z to be a consistent dual process with Z1 not identically zero.
template <class S>
NodeMeasure<S> z_to_node_measure(const EventTree<S>& tree, const MarketModel<S>& market,
                                 const Mat<S>& z, const lp::SolveOptions& options = {});

/// Z1 = q, Z2 = chi * q * spot. The result is a consistent dual process.
template <class S>
DualProcess<S> node_measure_to_z(const EventTree<S>& tree, const MarketModel<S>& market,
                                 const NodeMeasure<S>& nm,
                                 const lp::SolveOptions& options = {});

template <class S>
S node_measure_value(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                     const NodeMeasure<S>& nm, const Claim<S>& claim);

/// Inductive construction of (X, H) from (chi, q); value preserving. X sums
/// to 1 along every path, including paths whose measure dies out.
template <class S>
RandomizedStop<S> node_measure_to_randomized(const EventTree<S>& tree,
                                             const TwoAssetBands<S>& bands,
                                             const NodeMeasure<S>& nm, double tol = 0.0);

/// q = X * H / E[sum X H]; value preserving and a left inverse of the
/// construction above.
template <class S>
NodeMeasure<S> randomized_to_node_measure(const EventTree<S>& tree,
                                          const TwoAssetBands<S>& bands,
                                          const RandomizedStop<S>& rs, double tol = 0.0);

template <class S>
S randomized_value(const EventTree<S>& tree, const TwoAssetBands<S>& bands,
                   const RandomizedStop<S>& rs, const Claim<S>& claim);

}  // namespace treehedge
