#include <doctest.h>

#include "support.hpp"
#include "treehedge/dual.hpp"

using namespace treehedge;
using thtest::frac;

TEST_CASE("zero claim has a zero dual bound") {
    auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
    CHECK(dual_price(tree, market, zero_claim(tree, 2)).value == Rational(0));
}

TEST_CASE("two-date fixture: dual optimum and its certificate") {
    auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
    auto claim = thtest::efficient_frictions_claim(tree);
    auto result = dual_price(tree, market, claim);
    CHECK(result.value == frac(37, 30));
    CHECK(result.process.z[0] == Vec<Rational>{frac(2, 3), frac(3, 5)});
    CHECK(result.process.z[1] == Vec<Rational>{frac(1, 3), frac(1, 2)});
    CHECK(is_consistent_dual(tree, market, result.process.z));
    auto zbar = compute_zbar(tree, result.process.z);
    CHECK(zbar[0] == Vec<Rational>{Rational(1), frac(11, 10)});
    CHECK(zbar[1] == result.process.z[1]);  // leaf aggregate is the process itself
}

TEST_CASE("consistency checker accepts members and rejects scaled escapes") {
    auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
    Mat<Rational> zero(tree.size(), Vec<Rational>(2, Rational(0)));
    CHECK(is_consistent_dual(tree, market, zero));

    auto optimum = dual_price(tree, market, thtest::efficient_frictions_claim(tree));
    CHECK(is_consistent_dual(tree, market, optimum.process.z));

    auto bent = optimum.process.z;
    bent[1][1] *= Rational(2);  // ratio 3 leaves the band [9/10, 3/2]
    CHECK(!is_consistent_dual(tree, market, bent));
}

TEST_CASE("strict positivity search") {
    SUBCASE("a sure doubling with no costs forces a degenerate tail") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        Mat<Rational> zero_costs{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
        MarketModel<Rational> market;
        market.assets = 2;
        market.cones.push_back(
            cone_from_market(Vec<Rational>{Rational(1), Rational(1)}, zero_costs));
        market.cones.push_back(
            cone_from_market(Vec<Rational>{Rational(1), Rational(2)}, zero_costs));
        auto result = strictly_positive_cps(tree, market);
        CHECK(result.epsilon == Rational(0));
        CHECK(!result.process.has_value());
    }
    SUBCASE("a wide band over the same move leaves room") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        Mat<Rational> wide{{Rational(0), frac(3, 2)}, {frac(3, 2), Rational(0)}};
        MarketModel<Rational> market;
        market.assets = 2;
        market.cones.push_back(
            cone_from_market(Vec<Rational>{Rational(1), Rational(1)}, wide));
        market.cones.push_back(
            cone_from_market(Vec<Rational>{Rational(1), Rational(2)}, wide));
        auto result = strictly_positive_cps(tree, market);
        REQUIRE(result.process.has_value());
        CHECK(result.epsilon == frac(1, 2));
        CHECK(is_consistent_dual(tree, market, result.process->z));
        for (const auto& z : result.process->z)
            for (const auto& v : z) CHECK(v >= result.epsilon);
    }
    SUBCASE("a single costly period always admits an interior ray") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        auto market = thtest::uniform_market(
            tree, thtest::band_cone<Rational>(Rational(1), frac(1, 10), frac(1, 10)));
        auto result = strictly_positive_cps(tree, market);
        CHECK(result.epsilon > Rational(0));
        REQUIRE(result.process.has_value());
        CHECK(is_consistent_dual(tree, market, result.process->z));
    }
}

TEST_CASE("stopping-time dual on the two-date fixture stalls at the ask") {
    auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
    auto claim = thtest::efficient_frictions_claim(tree);

    auto zero = theta_price(tree, market, zero_claim(tree, 2));
    REQUIRE(zero.has_value);
    CHECK(zero.value == Rational(0));

    auto theta = theta_price(tree, market, claim);
    REQUIRE(theta.has_value);
    CHECK(theta.value == frac(11, 10));
    CHECK(theta.stopping_time_count == 2);
    CHECK(is_martingale_cps(tree, market, theta.best_z));
}

TEST_CASE("one-scenario constant-cone markets close the gap entirely") {
    thtest::Rng rng(314159);
    auto tree = thtest::deterministic_tree<Rational>(3);
    auto market = thtest::uniform_market(
        tree, thtest::band_cone<Rational>(frac(3, 2), frac(1, 5), frac(1, 10)));
    for (int trial = 0; trial < 20; ++trial) {
        Claim<Rational> claim = zero_claim(tree, 2);
        for (auto& v : claim.payoff)
            for (auto& c : v) c = frac(rng.uniform(-8, 8), 4);
        auto theta = theta_price(tree, market, claim);
        REQUIRE(theta.has_value);
        CHECK(theta.value == superhedge_price(tree, market, claim).price);
    }
}

TEST_CASE("gap report ties the three prices together") {
    SUBCASE("the fixture keeps a strict stopping-time gap") {
        auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
        auto report = duality_gap_report(tree, market,
                                         thtest::efficient_frictions_claim(tree));
        CHECK(report.h_primal == frac(37, 30));
        CHECK(report.h_dual == frac(37, 30));
        CHECK(report.primal_dual_equal);
        REQUIRE(report.theta_available);
        CHECK(report.h_theta == frac(11, 10));
        CHECK(report.gap == frac(2, 15));
        CHECK(report.gap > Rational(0));
    }
    SUBCASE("frictionless complete markets have no gap") {
        auto tree = thtest::binary_tree<Rational>(2);
        MarketModel<Rational> market;
        market.assets = 2;
        Mat<Rational> zero_costs{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
        std::vector<Rational> spot(tree.size());
        Claim<Rational> claim = zero_claim(tree, 2);
        for (int n = 0; n < tree.size(); ++n) {
            int parent = tree.node(n).parent;
            spot[n] = parent < 0 ? Rational(100)
                                 : spot[parent] * (n == tree.children(parent)[0]
                                                       ? frac(5, 4)
                                                       : frac(4, 5));
            market.cones.push_back(
                cone_from_market(Vec<Rational>{Rational(1), spot[n]}, zero_costs));
            Rational payoff = Rational(100) - spot[n];
            claim.payoff[n][0] = payoff > Rational(0) ? payoff : Rational(0);
        }
        auto report = duality_gap_report(tree, market, claim);
        CHECK(report.primal_dual_equal);
        REQUIRE(report.theta_available);
        CHECK(report.gap == Rational(0));
    }
    SUBCASE("claims paying only at the horizon leave nothing to randomize") {
        auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
        Claim<Rational> claim = zero_claim(tree, 2);
        claim.payoff[1] = Vec<Rational>{Rational(-2), Rational(1)};
        auto report = duality_gap_report(tree, market, claim);
        CHECK(report.primal_dual_equal);
        REQUIRE(report.theta_available);
        CHECK(report.gap == Rational(0));
    }
}

TEST_CASE("constitution-value claims and the failure conditions") {
    auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();

    SUBCASE("zero position gives the zero claim") {
        auto claim = build_counterexample_claim(tree, market,
                                                Vec<Rational>{Rational(0), Rational(0)});
        for (const auto& v : claim.payoff)
            for (const auto& c : v) CHECK(c == Rational(0));
    }
    SUBCASE("one risky unit gives the ask-then-deliver claim") {
        auto claim = build_counterexample_claim(tree, market,
                                                Vec<Rational>{Rational(0), Rational(1)});
        CHECK(claim.payoff[0] == Vec<Rational>{frac(11, 10), Rational(0)});
        CHECK(claim.payoff[1] == Vec<Rational>{Rational(0), Rational(1)});
        auto conds = check_counterexample_conditions(tree, market,
                                                     Vec<Rational>{Rational(0), Rational(1)});
        CHECK(conds.cond_ii);
        CHECK(conds.cond_i_sufficient);
    }
    SUBCASE("three assets with a free leg reproduce the same gap") {
        auto dtree = thtest::deterministic_tree<Rational>(1);
        auto wedge = [](const Rational& lambda, const Rational& mu) {
            Vec<Rational> prices{Rational(1), Rational(1), Rational(1)};
            Mat<Rational> costs{{Rational(0), lambda, Rational(0)},
                                {mu / (Rational(1) - mu), Rational(0),
                                 mu / (Rational(1) - mu)},
                                {Rational(0), lambda, Rational(0)}};
            return cone_from_market(prices, costs);
        };
        MarketModel<Rational> m3;
        m3.assets = 3;
        m3.cones.push_back(wedge(frac(1, 10), frac(1, 10)));
        m3.cones.push_back(wedge(frac(1, 2), frac(1, 10)));
        Vec<Rational> x{Rational(0), Rational(1), Rational(0)};
        auto claim = build_counterexample_claim(dtree, m3, x);
        CHECK(claim.payoff[0] == Vec<Rational>{frac(11, 10), Rational(0), Rational(0)});
        CHECK(claim.payoff[1] == x);
        auto conds = check_counterexample_conditions(dtree, m3, x);
        CHECK(conds.cond_ii);
        CHECK(!conds.cond_i_sufficient);  // the free leg kills efficient frictions
        auto report = duality_gap_report(dtree, m3, claim);
        CHECK(report.h_primal == frac(37, 30));
        REQUIRE(report.theta_available);
        CHECK(report.h_theta == frac(11, 10));
        CHECK(report.gap > Rational(0));
    }
    SUBCASE("frictionless roots never satisfy the sufficient condition") {
        auto dtree = thtest::deterministic_tree<Rational>(1);
        Mat<Rational> zero_costs{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
        auto market0 = thtest::uniform_market(
            dtree, cone_from_market(Vec<Rational>{Rational(1), Rational(1)}, zero_costs));
        auto conds = check_counterexample_conditions(dtree, market0,
                                                     Vec<Rational>{Rational(0), Rational(1)});
        CHECK(!conds.cond_i_sufficient);
    }
    SUBCASE("numeraire multiples trivially fail both conditions") {
        auto conds = check_counterexample_conditions(tree, market,
                                                     Vec<Rational>{Rational(3), Rational(0)});
        CHECK(!conds.cond_ii);
        CHECK(!conds.cond_i_sufficient);
    }
}

TEST_CASE("null transfer cycles stay inside the lineality spaces") {
    SUBCASE("efficient frictions everywhere") {
        auto [tree, market] = thtest::efficient_frictions_fixture<Rational>();
        CHECK(check_null_strategy_property(tree, market));
    }
    SUBCASE("frictionless markets recycle only along the exchange line") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        Mat<Rational> zero_costs{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
        auto market = thtest::uniform_market(
            tree, cone_from_market(Vec<Rational>{Rational(1), Rational(1)}, zero_costs));
        CHECK(check_null_strategy_property(tree, market));
    }
    SUBCASE("free entry at time zero, charged both ways later: still fine") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        MarketModel<Rational> market;
        market.assets = 2;
        Mat<Rational> free_both{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
        Mat<Rational> charged{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
        Vec<Rational> prices{Rational(1), Rational(1)};
        market.cones.push_back(cone_from_market(prices, free_both));
        market.cones.push_back(cone_from_market(prices, charged));
        CHECK(check_null_strategy_property(tree, market));
    }
    SUBCASE("one-way free legs pointing at each other break the property") {
        auto tree = thtest::deterministic_tree<Rational>(1);
        MarketModel<Rational> market;
        market.assets = 2;
        Vec<Rational> prices{Rational(1), Rational(1)};
        Mat<Rational> into_risky{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}};
        Mat<Rational> out_of_risky{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}};
        market.cones.push_back(cone_from_market(prices, into_risky));
        market.cones.push_back(cone_from_market(prices, out_of_risky));
        CHECK(!check_null_strategy_property(tree, market));
    }
    SUBCASE("random strict-cost markets with constant prices pass") {
        // with time-varying prices a drift can refund a round trip exactly, so
        // the guaranteed-true family fixes the prices and keeps every cost
        // strictly positive: each transfer then strictly loses mark-to-market
        // value and nothing but the zero strategy can cancel
        thtest::Rng rng(808);
        for (int trial = 0; trial < 8; ++trial) {
            auto inst = thtest::random_instance(rng);
            auto market = thtest::strict_constant_market(rng, inst.tree,
                                                         inst.market.assets);
            CHECK(check_null_strategy_property(inst.tree, market));
        }
    }
}

TEST_CASE("every stopped price system embeds into the dual cone") {
    thtest::Rng rng(161803);
    int done = 0;
    while (done < 8) {
        auto inst = thtest::random_instance(rng);
        if (count_stopping_times(inst.tree, 64) > 64) continue;
        auto dual = dual_price(inst.tree, inst.market, inst.claim);
        auto theta = theta_price(inst.tree, inst.market, inst.claim, 64);
        if (!theta.has_value) continue;  // no consistent price system at all
        CHECK(theta.value <= dual.value);

        // the winning stopped system, restricted to its stopping nodes, is a
        // dual process with the same pairing value
        Mat<Rational> embedded(inst.tree.size(),
                               Vec<Rational>(inst.market.assets, Rational(0)));
        for (int n = 0; n < inst.tree.size(); ++n)
            if (theta.best.stop[n]) embedded[n] = theta.best_z[n];
        CHECK(is_consistent_dual(inst.tree, inst.market, embedded));
        CHECK(thtest::dual_pairing(inst.tree, inst.claim, embedded) == theta.value);
        ++done;
    }
}

TEST_CASE("prices are positively homogeneous in the claim") {
    thtest::Rng rng(90210);
    auto inst = thtest::random_instance(rng);
    auto scaled = inst.claim;
    for (auto& v : scaled.payoff)
        for (auto& c : v) c *= Rational(3);
    CHECK(superhedge_price(inst.tree, inst.market, scaled).price ==
          Rational(3) * superhedge_price(inst.tree, inst.market, inst.claim).price);
    CHECK(dual_price(inst.tree, inst.market, scaled).value ==
          Rational(3) * dual_price(inst.tree, inst.market, inst.claim).value);
    if (count_stopping_times(inst.tree, 64) <= 64) {
        auto t1 = theta_price(inst.tree, inst.market, inst.claim, 64);
        auto t3 = theta_price(inst.tree, inst.market, scaled, 64);
        REQUIRE(t1.has_value == t3.has_value);
        if (t1.has_value) CHECK(t3.value == Rational(3) * t1.value);
    }
}
