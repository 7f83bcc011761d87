#include "treehedge/primal.hpp"

#include <utility>

namespace treehedge {

namespace {

template <class S>
struct HedgeLayout {
    int alpha = -1;
    std::vector<int> xi_base;
    std::vector<int> slack_base;
    int total = 0;
};

// Columns: [alpha?] then per node its xi weights, then per constrained node
// its slack weights. Rows: d equations per constrained node equating the
// running portfolio minus the claim with a nonnegative generator combination.
template <class S>
HedgeLayout<S> make_layout(const EventTree<S>& tree, const MarketModel<S>& market,
                           const std::vector<char>& constrained, bool with_alpha) {
    HedgeLayout<S> layout;
    int col = 0;
    if (with_alpha) layout.alpha = col++;
    layout.xi_base.assign(tree.size(), -1);
    layout.slack_base.assign(tree.size(), -1);
    for (int n = 0; n < tree.size(); ++n) {
        layout.xi_base[n] = col;
        col += static_cast<int>(market.cone(n).generators.size());
    }
    for (int n = 0; n < tree.size(); ++n) {
        if (!constrained[n]) continue;
        layout.slack_base[n] = col;
        col += static_cast<int>(market.cone(n).generators.size());
    }
    layout.total = col;
    return layout;
}

template <class S>
lp::LpProblem<S> hedge_problem(const EventTree<S>& tree, const MarketModel<S>& market,
                               const std::vector<Vec<S>>& target,
                               const std::vector<char>& constrained,
                               const HedgeLayout<S>& layout, const Vec<S>* direction,
                               const Vec<S>* fixed_initial) {
    const int d = market.assets;
    lp::LpProblem<S> p;
    p.objective.assign(layout.total, S(0));
    if (layout.alpha >= 0) p.objective[layout.alpha] = S(1);
    p.bounds.assign(layout.total, lp::VarBound<S>{});
    if (layout.alpha >= 0)
        p.bounds[layout.alpha] = lp::VarBound<S>{std::nullopt, std::nullopt};

    for (int n = 0; n < tree.size(); ++n) {
        if (!constrained[n]) continue;
        for (int k = 0; k < d; ++k) {
            lp::LpRow<S> row;
            row.coeffs.assign(layout.total, S(0));
            if (layout.alpha >= 0) row.coeffs[layout.alpha] = (*direction)[k];
            // transfers accumulate along the whole root path
            for (int a = n; a >= 0; a = tree.node(a).parent) {
                const auto& gens = market.cone(a).generators;
                for (std::size_t g = 0; g < gens.size(); ++g)
                    row.coeffs[layout.xi_base[a] + static_cast<int>(g)] -= gens[g][k];
            }
            const auto& gens = market.cone(n).generators;
            for (std::size_t g = 0; g < gens.size(); ++g)
                row.coeffs[layout.slack_base[n] + static_cast<int>(g)] -= gens[g][k];
            row.rel = lp::Relation::Equal;
            row.rhs = target[n][k];
            if (fixed_initial) row.rhs -= (*fixed_initial)[k];
            p.rows.push_back(std::move(row));
        }
    }
    return p;
}

template <class S>
TransferPlan<S> plan_from_solution(const EventTree<S>& tree, const MarketModel<S>& market,
                                   const HedgeLayout<S>& layout,
                                   const std::vector<char>& constrained,
                                   const Vec<S>& solution, const Vec<S>& initial) {
    const int d = market.assets;
    TransferPlan<S> plan;
    plan.xi.assign(tree.size(), Vec<S>(d, S(0)));
    plan.xi_weights.assign(tree.size(), {});
    plan.slack_weights.assign(tree.size(), {});
    plan.value.assign(tree.size(), Vec<S>(d, S(0)));
    for (int n = 0; n < tree.size(); ++n) {
        const auto& gens = market.cone(n).generators;
        plan.xi_weights[n].assign(gens.size(), S(0));
        for (std::size_t g = 0; g < gens.size(); ++g) {
            S w = solution[layout.xi_base[n] + static_cast<int>(g)];
            plan.xi_weights[n][g] = w;
            for (int k = 0; k < d; ++k) plan.xi[n][k] -= w * gens[g][k];
        }
        if (constrained[n]) {
            plan.slack_weights[n].assign(gens.size(), S(0));
            for (std::size_t g = 0; g < gens.size(); ++g)
                plan.slack_weights[n][g] =
                    solution[layout.slack_base[n] + static_cast<int>(g)];
        }
        int parent = tree.node(n).parent;
        for (int k = 0; k < d; ++k)
            plan.value[n][k] =
                (parent < 0 ? initial[k] : plan.value[parent][k]) + plan.xi[n][k];
    }
    return plan;
}

}  // namespace

template <class S>
PricingResult<S> superhedge_price_along(const EventTree<S>& tree,
                                        const MarketModel<S>& market,
                                        const Claim<S>& claim, const Vec<S>& direction,
                                        const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    check_claim_shape(tree, market, claim);
    if (static_cast<int>(direction.size()) != market.assets)
        fail(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    bool has_positive = false;
    for (const S& v : direction) {
        if (fuzzy_sign(v, 0.0) < 0)
            fail(ErrorCode::ValidationError, "direction must be nonnegative");
        if (fuzzy_sign(v, 0.0) > 0) has_positive = true;
    }
    if (!has_positive) fail(ErrorCode::ValidationError, "direction must be nonzero");

    std::vector<char> constrained(tree.size(), 1);
    auto layout = make_layout(tree, market, constrained, true);
    auto problem =
        hedge_problem(tree, market, claim.payoff, constrained, layout, &direction,
                      static_cast<const Vec<S>*>(nullptr));
    auto out = lp::solve_lp(problem, options);
    if (out.status == lp::LpStatus::Infeasible)
        fail(ErrorCode::InfeasibleClaim,
             "no endowment along the direction super-hedges the claim; cone is malformed");
    if (out.status == lp::LpStatus::Unbounded)
        fail(ErrorCode::UnboundedBelow,
             "super-hedging cost unbounded below; the market admits arbitrage inside a "
             "single cone");

    PricingResult<S> result;
    result.price = out.value;
    Vec<S> initial(market.assets, S(0));
    for (int k = 0; k < market.assets; ++k) initial[k] = out.value * direction[k];
    result.plan =
        plan_from_solution(tree, market, layout, constrained, out.solution, initial);
    return result;
}

template <class S>
PricingResult<S> superhedge_price(const EventTree<S>& tree, const MarketModel<S>& market,
                                  const Claim<S>& claim, const lp::SolveOptions& options) {
    return superhedge_price_along(tree, market, claim,
                                  first_asset_direction<S>(market.assets), options);
}

template <class S>
std::optional<TransferPlan<S>> gamma_contains(const EventTree<S>& tree,
                                              const MarketModel<S>& market,
                                              const Claim<S>& claim, const Vec<S>& x,
                                              const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    check_claim_shape(tree, market, claim);
    if (static_cast<int>(x.size()) != market.assets)
        fail(ErrorCode::DimensionMismatch, "endowment has wrong dimension");

    std::vector<char> constrained(tree.size(), 1);
    auto layout = make_layout(tree, market, constrained, false);
    auto problem =
        hedge_problem(tree, market, claim.payoff, constrained, layout,
                      static_cast<const Vec<S>*>(nullptr), &x);
    auto out = lp::solve_lp(problem, options);
    if (out.status != lp::LpStatus::Optimal) return std::nullopt;
    return plan_from_solution(tree, market, layout, constrained, out.solution, x);
}

template <class S>
std::vector<Mat<S>> extract_exchanges(const EventTree<S>& tree,
                                      const MarketModel<S>& market,
                                      const TransferPlan<S>& plan) {
    const int d = market.assets;
    std::vector<Mat<S>> eta(tree.size(), Mat<S>(d, Vec<S>(d, S(0))));
    for (int n = 0; n < tree.size(); ++n) {
        const auto& cone = market.cone(n);
        if (!cone.from_market)
            fail(ErrorCode::NotMarketCone,
                 "exchange extraction requires market-built cones");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j) continue;
                eta[n][i][j] = plan.xi_weights[n][cone.exchange_generator(i, j)];
            }
    }
    return eta;
}

template <class S>
PricingResult<S> european_price(const EventTree<S>& tree, const MarketModel<S>& market,
                                const std::vector<Vec<S>>& leaf_payoff,
                                const lp::SolveOptions& options) {
    check_market_shape(tree, market);
    if (leaf_payoff.size() != tree.leaves().size())
        fail(ErrorCode::DimensionMismatch, "one payoff vector per leaf required");

    std::vector<Vec<S>> target(tree.size(), Vec<S>(market.assets, S(0)));
    std::vector<char> constrained(tree.size(), 0);
    for (std::size_t k = 0; k < tree.leaves().size(); ++k) {
        if (static_cast<int>(leaf_payoff[k].size()) != market.assets)
            fail(ErrorCode::DimensionMismatch, "payoff vector has wrong dimension");
        target[tree.leaves()[k]] = leaf_payoff[k];
        constrained[tree.leaves()[k]] = 1;
    }
    Vec<S> direction = first_asset_direction<S>(market.assets);
    auto layout = make_layout(tree, market, constrained, true);
    auto problem = hedge_problem(tree, market, target, constrained, layout, &direction,
                                 static_cast<const Vec<S>*>(nullptr));
    auto out = lp::solve_lp(problem, options);
    if (out.status == lp::LpStatus::Infeasible)
        fail(ErrorCode::InfeasibleClaim, "payoff cannot be dominated; cone is malformed");
    if (out.status == lp::LpStatus::Unbounded)
        fail(ErrorCode::UnboundedBelow,
             "hedging cost unbounded below; the market admits arbitrage inside a single "
             "cone");
    PricingResult<S> result;
    result.price = out.value;
    Vec<S> initial(market.assets, S(0));
    initial[0] = out.value;
    result.plan =
        plan_from_solution(tree, market, layout, constrained, out.solution, initial);
    return result;
}

template <class S>
bool verify_plan(const EventTree<S>& tree, const MarketModel<S>& market,
                 const Claim<S>& claim, const Vec<S>& initial, const TransferPlan<S>& plan,
                 const lp::SolveOptions& options) {
    const int d = market.assets;
    Mat<S> value(tree.size(), Vec<S>(d, S(0)));
    for (int n = 0; n < tree.size(); ++n) {
        int parent = tree.node(n).parent;
        Vec<S> neg_xi(d);
        for (int k = 0; k < d; ++k) {
            value[n][k] = (parent < 0 ? initial[k] : value[parent][k]) + plan.xi[n][k];
            neg_xi[k] = -plan.xi[n][k];
        }
        if (!cone_contains(market.cone(n), neg_xi, options)) return false;
        Vec<S> surplus(d);
        for (int k = 0; k < d; ++k) surplus[k] = value[n][k] - claim.payoff[n][k];
        if (!cone_contains(market.cone(n), surplus, options)) return false;
    }
    return true;
}

#define TREEHEDGE_INSTANTIATE_PRIMAL(S)                                                   \
    template PricingResult<S> superhedge_price_along(                                     \
        const EventTree<S>&, const MarketModel<S>&, const Claim<S>&, const Vec<S>&,       \
        const lp::SolveOptions&);                                                         \
    template PricingResult<S> superhedge_price(const EventTree<S>&, const MarketModel<S>&,\
                                               const Claim<S>&, const lp::SolveOptions&); \
    template std::optional<TransferPlan<S>> gamma_contains(                               \
        const EventTree<S>&, const MarketModel<S>&, const Claim<S>&, const Vec<S>&,       \
        const lp::SolveOptions&);                                                         \
    template std::vector<Mat<S>> extract_exchanges(                                       \
        const EventTree<S>&, const MarketModel<S>&, const TransferPlan<S>&);              \
    template PricingResult<S> european_price(const EventTree<S>&, const MarketModel<S>&,  \
                                             const std::vector<Vec<S>>&,                  \
                                             const lp::SolveOptions&);                    \
    template bool verify_plan(const EventTree<S>&, const MarketModel<S>&, const Claim<S>&,\
                              const Vec<S>&, const TransferPlan<S>&,                      \
                              const lp::SolveOptions&);

TREEHEDGE_INSTANTIATE_PRIMAL(Rational)
TREEHEDGE_INSTANTIATE_PRIMAL(double)

#undef TREEHEDGE_INSTANTIATE_PRIMAL

}  // namespace treehedge
