#pragma once

#include <cstdint>
#include <optional>

#include "treehedge/market.hpp"
#include "treehedge/primal.hpp"

namespace treehedge {

/// Adapted nonnegative process Z with its forward aggregate Zbar, where
/// Zbar(n) = Z(n) + sum over children c of p(c) * Zbar(c). Membership in the
/// dual cone requires both Z(n) and Zbar(n) to satisfy the node's polar
/// inequalities.
///
/// Everything is expressed under the physical branch probabilities: on a
/// finite tree with strictly positive branches, switching to an equivalent
/// measure only reweights Z by the density process, and integrability of the
/// pairings is automatic.
template <class S>
struct DualProcess {
    Mat<S> z;  // [node][asset]
};

template <class S>
Mat<S> compute_zbar(const EventTree<S>& tree, const Mat<S>& z);

template <class S>
struct DualPriceResult {
    S value = S(0);
    DualProcess<S> process;
};

/// Best dual bound: maximize E[sum_t claim_t . Z_t] over dual processes
/// normalized by Zbar(root) . direction = 1.
template <class S>
DualPriceResult<S> dual_price(const EventTree<S>& tree, const MarketModel<S>& market,
                              const Claim<S>& claim, const lp::SolveOptions& options = {});

template <class S>
DualPriceResult<S> dual_price_along(const EventTree<S>& tree, const MarketModel<S>& market,
                                    const Claim<S>& claim, const Vec<S>& direction,
                                    const lp::SolveOptions& options = {});

/// Recomputes the aggregate and checks both polar memberships at every node.
template <class S>
bool is_consistent_dual(const EventTree<S>& tree, const MarketModel<S>& market,
                        const Mat<S>& z, double tol = 0.0);

/// Martingale process in the polar cones (a consistent price system).
template <class S>
bool is_martingale_cps(const EventTree<S>& tree, const MarketModel<S>& market,
                       const Mat<S>& z, double tol = 0.0);

template <class S>
struct StrictPositivityResult {
    S epsilon = S(0);
    std::optional<DualProcess<S>> process;  // present iff epsilon > 0
};

/// Largest componentwise floor epsilon admitted by a dual process with
/// sum of first components equal to 1. epsilon > 0 certifies a strictly
/// positive dual process; epsilon = 0 reports none.
template <class S>
StrictPositivityResult<S> strictly_positive_cps(const EventTree<S>& tree,
                                                const MarketModel<S>& market,
                                                const lp::SolveOptions& options = {});

/// Value of the best consistent price system stopped at a fixed rule:
/// maximize sum over stopping nodes of P(n) claim(n) . Z(n) over martingale
/// consistent price systems with Z(root) . direction = 1. Empty when no
/// consistent price system exists.
template <class S>
std::optional<std::pair<S, Mat<S>>> stopped_cps_value(
    const EventTree<S>& tree, const MarketModel<S>& market, const Claim<S>& claim,
    const StoppingTime& st, const lp::SolveOptions& options = {});

template <class S>
struct ThetaResult {
    bool has_value = false;  // false when the market has no consistent price system
    S value = S(0);
    StoppingTime best;
    Mat<S> best_z;
    std::uint64_t stopping_time_count = 0;
};

/// Exercise-rule dual price: the maximum of stopped_cps_value over all
/// stopping times. Throws Error(EnumerationCapExceeded) past `cap`.
template <class S>
ThetaResult<S> theta_price(const EventTree<S>& tree, const MarketModel<S>& market,
                           const Claim<S>& claim,
                           std::uint64_t cap = kDefaultStoppingTimeCap,
                           const lp::SolveOptions& options = {});

template <class S>
struct GapReport {
    S h_primal = S(0);
    S h_dual = S(0);
    bool primal_dual_equal = false;
    bool theta_available = false;
    S h_theta = S(0);
    S gap = S(0);  // h_primal - h_theta when theta_available
    std::uint64_t stopping_time_count = 0;
    TransferPlan<S> plan;
    DualProcess<S> dual;
};

template <class S>
GapReport<S> duality_gap_report(const EventTree<S>& tree, const MarketModel<S>& market,
                                const Claim<S>& claim,
                                std::uint64_t theta_cap = kDefaultStoppingTimeCap,
                                const lp::SolveOptions& options = {});

/// The claim paying the constitution value of x (in units of the first
/// asset) at the root and x itself at every later node.
template <class S>
Claim<S> build_counterexample_claim(const EventTree<S>& tree, const MarketModel<S>& market,
                                    const Vec<S>& x, const lp::SolveOptions& options = {});

struct CounterexampleConditions {
    bool cond_ii = false;           // x - c_0(x) e1 outside the root cone
    bool cond_i_sufficient = false; // efficient frictions at the root, x not a
                                    // multiple of e1, and the constitution value
                                    // rises on some time-1 node
};

template <class S>
CounterexampleConditions check_counterexample_conditions(
    const EventTree<S>& tree, const MarketModel<S>& market, const Vec<S>& x,
    const lp::SolveOptions& options = {});

/// Checks that admissible transfer processes summing to zero along every path
/// stay inside the per-node lineality spaces. Decided by one box-normalized
/// LP per (node, complement direction, sign).
template <class S>
bool check_null_strategy_property(const EventTree<S>& tree, const MarketModel<S>& market,
                                  const lp::SolveOptions& options = {});

}  // namespace treehedge
