#pragma once

#include "treehedge/cones.hpp"
#include "treehedge/tree.hpp"

namespace treehedge {

/// One solvency cone per tree node, indexed like the tree.
template <class S>
struct MarketModel {
    int assets = 0;
    std::vector<SolvencyCone<S>> cones;

    const SolvencyCone<S>& cone(int node) const { return cones[node]; }
};

template <class S>
void check_market_shape(const EventTree<S>& tree, const MarketModel<S>& market) {
    if (static_cast<int>(market.cones.size()) != tree.size())
        fail(ErrorCode::DimensionMismatch, "market does not cover every tree node");
    for (const auto& cone : market.cones)
        if (cone.dim != market.assets)
            fail(ErrorCode::DimensionMismatch, "cone dimension differs from asset count");
}

/// American claim: a payoff vector in physical units at every node.
template <class S>
struct Claim {
    std::vector<Vec<S>> payoff;  // [node][asset]
};

template <class S>
void check_claim_shape(const EventTree<S>& tree, const MarketModel<S>& market,
                       const Claim<S>& claim) {
    if (static_cast<int>(claim.payoff.size()) != tree.size())
        fail(ErrorCode::DimensionMismatch, "claim does not cover every tree node");
    for (const auto& v : claim.payoff)
        if (static_cast<int>(v.size()) != market.assets)
            fail(ErrorCode::DimensionMismatch, "claim vector has wrong dimension");
}

template <class S>
Claim<S> zero_claim(const EventTree<S>& tree, int assets) {
    Claim<S> c;
    c.payoff.assign(tree.size(), Vec<S>(assets, S(0)));
    return c;
}

template <class S>
Vec<S> first_asset_direction(int assets) {
    Vec<S> dir(assets, S(0));
    dir[0] = S(1);
    return dir;
}

}  // namespace treehedge
