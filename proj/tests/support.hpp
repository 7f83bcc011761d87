#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here deliberately avoids the library's LP path so expected values come from
// a second route.

#include <random>
#include <vector>

#include "treehedge/dual.hpp"
#include "treehedge/randomization.hpp"

namespace thtest {

using namespace treehedge;

// mpq_class(p, q) does not reduce; always build fractions through this.
inline Rational frac(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// --- tree builders ---------------------------------------------------------

template <class S>
EventTree<S> deterministic_tree(int horizon) {
    std::vector<TreeNodeRecord<S>> recs;
    recs.push_back({0, 0, std::nullopt, S(1)});
    for (int t = 1; t <= horizon; ++t)
        recs.push_back({t, t, std::int64_t(t - 1), S(1)});
    return EventTree<S>::build(std::move(recs));
}

// Complete binary tree, both branches probability 1/2, ids in BFS order.
template <class S>
EventTree<S> binary_tree(int horizon) {
    std::vector<TreeNodeRecord<S>> recs;
    recs.push_back({0, 0, std::nullopt, S(1)});
    std::int64_t next = 1;
    std::vector<std::pair<std::int64_t, int>> frontier{{0, 0}};
    S half = S(1) / S(2);
    while (!frontier.empty()) {
        std::vector<std::pair<std::int64_t, int>> grown;
        for (auto [id, t] : frontier) {
            if (t == horizon) continue;
            for (int b = 0; b < 2; ++b) {
                recs.push_back({next, t + 1, id, half});
                grown.push_back({next, t + 1});
                ++next;
            }
        }
        frontier = std::move(grown);
    }
    return EventTree<S>::build(std::move(recs));
}

// --- market builders -------------------------------------------------------

// Two-asset band market with numeraire price 1: buy the risky asset at
// spot*(1+lambda), sell at spot*(1-mu).
template <class S>
SolvencyCone<S> band_cone(const S& spot, const S& lambda, const S& mu) {
    Vec<S> prices{S(1), spot};
    Mat<S> costs{{S(0), lambda}, {mu / (S(1) - mu), S(0)}};
    return cone_from_market(prices, costs);
}

template <class S>
MarketModel<S> uniform_market(const EventTree<S>& tree, const SolvencyCone<S>& cone) {
    MarketModel<S> market;
    market.assets = cone.dim;
    market.cones.assign(tree.size(), cone);
    return market;
}

// The two-date efficient-frictions fixture: lambda_0=1/10, mu_0=1/10,
// lambda_1=1/2, mu_1=1/10, flat spot 1, deterministic tree.
template <class S>
std::pair<EventTree<S>, MarketModel<S>> efficient_frictions_fixture() {
    EventTree<S> tree = deterministic_tree<S>(1);
    S tenth = S(1) / S(10);
    MarketModel<S> market;
    market.assets = 2;
    market.cones.push_back(band_cone<S>(S(1), tenth, tenth));
    market.cones.push_back(band_cone<S>(S(1), S(1) / S(2), tenth));
    return {std::move(tree), std::move(market)};
}

template <class S>
Claim<S> efficient_frictions_claim(const EventTree<S>& tree) {
    Claim<S> claim = zero_claim(tree, 2);
    claim.payoff[0] = Vec<S>{S(11) / S(10), S(0)};
    claim.payoff[1] = Vec<S>{S(0), S(1)};
    return claim;
}

// --- independent oracles ---------------------------------------------------

// Backward-induction value of an American cash payoff on a binary tree under
// the unique risk-neutral measure of a frictionless binomial market.
template <class S>
S snell_value(const EventTree<S>& tree, const std::vector<S>& cash_payoff, const S& q_up) {
    std::vector<S> value(tree.size(), S(0));
    for (int n = tree.size() - 1; n >= 0; --n) {
        if (tree.is_leaf(n)) {
            value[n] = cash_payoff[n];
            continue;
        }
        const auto& kids = tree.children(n);
        S cont = q_up * value[kids[0]] + (S(1) - q_up) * value[kids[1]];
        value[n] = cash_payoff[n] > cont ? cash_payoff[n] : cont;
    }
    return value[tree.root()];
}

// Exact minimizer of max(a0 + s0*b, a1 - s1*b) over b >= 0 (s0, s1 > 0): the
// one-dimensional purchase-fraction search for the two-date fixture.
template <class S>
S min_of_max_affine(const S& a0, const S& s0, const S& a1, const S& s1) {
    S cross = (a1 - a0) / (s0 + s1);
    if (cross < S(0)) cross = S(0);
    S left = a0 + s0 * cross;
    S right = a1 - s1 * cross;
    return left > right ? left : right;
}

// --- random instances ------------------------------------------------------

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    int uniform(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
};

// log-spread rational price grid
inline Rational random_price(Rng& rng) {
    static const char* grid[] = {"1/4", "1/3", "1/2", "2/3", "1",
                                 "3/2", "2",   "3",   "4"};
    return rational_from_string(grid[rng.uniform(0, 8)]);
}

inline Rational random_cost(Rng& rng) {
    return frac(rng.uniform(0, 6), 20);  // multiples of 0.05 in [0, 0.3]
}

template <class S>
struct RandomInstance {
    EventTree<S> tree;
    MarketModel<S> market;
    Claim<S> claim;
};

// Time-constant prices with strictly positive costs everywhere: every
// transfer strictly loses mark-to-market value, so only the zero strategy
// cancels over time.
inline MarketModel<Rational> strict_constant_market(Rng& rng,
                                                    const EventTree<Rational>& tree,
                                                    int assets) {
    Vec<Rational> prices(assets);
    for (auto& p : prices) p = random_price(rng);
    Mat<Rational> costs(assets, Vec<Rational>(assets, Rational(0)));
    for (int i = 0; i < assets; ++i)
        for (int j = 0; j < assets; ++j)
            if (i != j) costs[i][j] = frac(rng.uniform(1, 6), 20);
    MarketModel<Rational> market;
    market.assets = assets;
    market.cones.assign(tree.size(), cone_from_market(prices, costs));
    return market;
}

struct RandomInstanceOptions {
    int max_horizon = 3;
    int max_branching = 3;
    int min_assets = 2;
    int max_assets = 3;
    bool force_two_asset_numeraire = false;  // d = 2 with flat numeraire price 1
};

inline RandomInstance<Rational> random_instance(Rng& rng,
                                                const RandomInstanceOptions& opt = {}) {
    const int horizon = rng.uniform(1, opt.max_horizon);
    const int d = opt.force_two_asset_numeraire
                      ? 2
                      : rng.uniform(opt.min_assets, opt.max_assets);

    std::vector<TreeNodeRecord<Rational>> recs;
    recs.push_back({0, 0, std::nullopt, Rational(1)});
    std::int64_t next = 1;
    std::vector<std::pair<std::int64_t, int>> frontier{{0, 0}};
    while (!frontier.empty()) {
        std::vector<std::pair<std::int64_t, int>> grown;
        for (auto [id, t] : frontier) {
            if (t == horizon) continue;
            int kids = rng.uniform(1, opt.max_branching);
            std::vector<int> weights(kids);
            int total = 0;
            for (int& w : weights) {
                w = rng.uniform(1, 4);
                total += w;
            }
            for (int k = 0; k < kids; ++k) {
                recs.push_back({next, t + 1, id, frac(weights[k], total)});
                grown.push_back({next, t + 1});
                ++next;
            }
        }
        frontier = std::move(grown);
    }
    RandomInstance<Rational> inst{EventTree<Rational>::build(std::move(recs)), {}, {}};

    inst.market.assets = d;
    inst.market.cones.reserve(inst.tree.size());
    // prices follow a multiplicative walk from a log-spread root level, so a
    // fair share of instances keeps a consistent price system while others
    // genuinely admit arbitrage
    Mat<Rational> prices_at(inst.tree.size(), Vec<Rational>(d));
    for (int n = 0; n < inst.tree.size(); ++n) {
        int parent = inst.tree.node(n).parent;
        for (int i = 0; i < d; ++i) {
            if (opt.force_two_asset_numeraire && i == 0) {
                prices_at[n][i] = Rational(1);
            } else if (parent < 0) {
                prices_at[n][i] = random_price(rng);
            } else {
                static const char* steps[] = {"2/3", "1", "1", "3/2"};
                prices_at[n][i] = prices_at[parent][i] *
                                  rational_from_string(steps[rng.uniform(0, 3)]);
            }
        }
    }
    for (int n = 0; n < inst.tree.size(); ++n) {
        Mat<Rational> costs(d, Vec<Rational>(d, Rational(0)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) costs[i][j] = random_cost(rng);
        inst.market.cones.push_back(cone_from_market(prices_at[n], costs));
    }

    inst.claim = zero_claim(inst.tree, d);
    for (int n = 0; n < inst.tree.size(); ++n)
        for (int k = 0; k < d; ++k)
            inst.claim.payoff[n][k] = frac(rng.uniform(-8, 8), 4);
    return inst;
}

template <class S>
RandomInstance<S> convert_instance(const RandomInstance<Rational>& src);

template <>
inline RandomInstance<Rational> convert_instance(const RandomInstance<Rational>& src) {
    return src;
}

template <>
inline RandomInstance<double> convert_instance(const RandomInstance<Rational>& src) {
    RandomInstance<double> dst;
    // rebuild the tree from records in double precision
    std::vector<TreeNodeRecord<double>> recs;
    for (int n = 0; n < src.tree.size(); ++n) {
        const auto& node = src.tree.node(n);
        TreeNodeRecord<double> rec;
        rec.id = node.id;
        rec.time = node.time;
        if (node.parent >= 0) rec.parent = src.tree.node(node.parent).id;
        rec.prob = rational_to_double(node.prob);
        recs.push_back(rec);
    }
    dst.tree = EventTree<double>::build(std::move(recs));
    dst.market.assets = src.market.assets;
    for (int n = 0; n < src.tree.size(); ++n) {
        const auto& cone = src.market.cone(n);
        Vec<double> prices;
        for (const auto& p : cone.prices) prices.push_back(rational_to_double(p));
        Mat<double> costs;
        for (const auto& row : cone.costs) {
            Vec<double> r;
            for (const auto& c : row) r.push_back(rational_to_double(c));
            costs.push_back(r);
        }
        dst.market.cones.push_back(cone_from_market(prices, costs));
    }
    dst.claim = zero_claim(dst.tree, dst.market.assets);
    for (int n = 0; n < src.tree.size(); ++n)
        for (int k = 0; k < dst.market.assets; ++k)
            dst.claim.payoff[n][k] = rational_to_double(src.claim.payoff[n][k]);
    return dst;
}

// A spread of dual-feasible processes: vertices of the dual cone for random
// linear objectives, plus the strictly positive one when it exists.
inline std::vector<Mat<Rational>> sample_dual_processes(Rng& rng,
                                                        const EventTree<Rational>& tree,
                                                        const MarketModel<Rational>& market,
                                                        int count) {
    std::vector<Mat<Rational>> out;
    auto positive = strictly_positive_cps(tree, market);
    if (positive.process.has_value()) out.push_back(positive.process->z);
    while (static_cast<int>(out.size()) < count) {
        Claim<Rational> objective = zero_claim(tree, market.assets);
        for (int n = 0; n < tree.size(); ++n)
            for (int k = 0; k < market.assets; ++k)
                objective.payoff[n][k] = frac(rng.uniform(-6, 6), 3);
        auto vertex = dual_price(tree, market, objective);
        if (!out.empty() && rng.uniform(0, 1) == 1) {
            // interior mixture of the last two samples
            Mat<Rational> mix = vertex.process.z;
            const Mat<Rational>& other = out.back();
            Rational a = frac(rng.uniform(1, 3), 4);
            for (int n = 0; n < tree.size(); ++n)
                for (int k = 0; k < market.assets; ++k)
                    mix[n][k] = a * mix[n][k] + (Rational(1) - a) * other[n][k];
            out.push_back(std::move(mix));
        } else {
            out.push_back(std::move(vertex.process.z));
        }
    }
    return out;
}

// E[sum claim_t . Z_t] and E[sum Z^1_t]
template <class S>
S dual_pairing(const EventTree<S>& tree, const Claim<S>& claim, const Mat<S>& z) {
    S out = S(0);
    for (int n = 0; n < tree.size(); ++n)
        for (std::size_t k = 0; k < z[n].size(); ++k)
            out += tree.node_probability(n) * claim.payoff[n][k] * z[n][k];
    return out;
}

template <class S>
S first_component_mass(const EventTree<S>& tree, const Mat<S>& z) {
    S out = S(0);
    for (int n = 0; n < tree.size(); ++n) out += tree.node_probability(n) * z[n][0];
    return out;
}

}  // namespace thtest
