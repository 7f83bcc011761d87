#pragma once

#include <optional>

#include "treehedge/market.hpp"

namespace treehedge {

/// Self-certifying hedge: per node the transfer xi (as nonnegative weights on
/// the generators of -K) and the domination slack (weights on K's
/// generators), plus the running portfolio V after each transfer.
template <class S>
struct TransferPlan {
    Mat<S> xi;            // [node][asset], xi(node) in -K(node)
    Mat<S> xi_weights;    // [node][generator], xi = -sum w_g g
    Mat<S> slack_weights; // [node][generator], V - claim = sum w_g g
    Mat<S> value;         // [node][asset], V at the node
};

template <class S>
struct PricingResult {
    S price = S(0);
    TransferPlan<S> plan;
};

/// Cheapest initial endowment along `direction` (default: the first asset)
/// whose portfolio dominates the claim at every node. Throws
/// Error(InfeasibleClaim) / Error(UnboundedBelow) on malformed markets.
template <class S>
PricingResult<S> superhedge_price(const EventTree<S>& tree, const MarketModel<S>& market,
                                  const Claim<S>& claim,
                                  const lp::SolveOptions& options = {});

template <class S>
PricingResult<S> superhedge_price_along(const EventTree<S>& tree,
                                        const MarketModel<S>& market,
                                        const Claim<S>& claim, const Vec<S>& direction,
                                        const lp::SolveOptions& options = {});

/// Can the claim be super-hedged starting from endowment x? Returns a witness
/// plan when it can.
template <class S>
std::optional<TransferPlan<S>> gamma_contains(const EventTree<S>& tree,
                                              const MarketModel<S>& market,
                                              const Claim<S>& claim, const Vec<S>& x,
                                              const lp::SolveOptions& options = {});

/// Per-node single-exchange matrices eta: eta[i][j] is the number of units of
/// asset j bought against asset i. Requires market-built cones.
template <class S>
std::vector<Mat<S>> extract_exchanges(const EventTree<S>& tree,
                                      const MarketModel<S>& market,
                                      const TransferPlan<S>& plan);

/// Price of a payoff due only at the horizon: domination is required at the
/// leaves alone.
template <class S>
PricingResult<S> european_price(const EventTree<S>& tree, const MarketModel<S>& market,
                                const std::vector<Vec<S>>& leaf_payoff,
                                const lp::SolveOptions& options = {});

/// Re-checks a plan against the raw cone-membership tests (not the LP's own
/// slack variables): xi(n) in -K(n) and V(n) - claim(n) in K(n) everywhere.
template <class S>
bool verify_plan(const EventTree<S>& tree, const MarketModel<S>& market,
                 const Claim<S>& claim, const Vec<S>& initial,
                 const TransferPlan<S>& plan, const lp::SolveOptions& options = {});

}  // namespace treehedge
