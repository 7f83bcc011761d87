// Command-line front end: prices American claims on event-tree markets with
// proportional transaction costs and prints the dual certificates next to
// every number so reports can be re-checked from the file alone.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "treehedge/io.hpp"
#include "treehedge/kernels.hpp"

namespace th = treehedge;
using th::io::json;

namespace {

struct Args {
    std::string command;
    std::string market_path;
    std::string claim_path;
    std::string mode;  // "", "rational" or "float"
    double tol = 1e-9;
    std::string output = "table";
    std::uint64_t theta_cap = th::kDefaultStoppingTimeCap;
    std::string direction;
    std::string x;
};

template <class S>
th::Vec<S> parse_vector_arg(const std::string& text, int dim, const char* what) {
    th::Vec<S> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        if (!part.empty())
            out.push_back(th::scalar_from_rational<S>(th::rational_from_string(part)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (static_cast<int>(out.size()) != dim)
        th::fail(th::ErrorCode::DimensionMismatch,
                 std::string(what) + " must have one entry per asset");
    return out;
}

template <class S>
json vec_json(const th::Vec<S>& v) {
    json out = json::array();
    for (const S& x : v) out.push_back(th::io::scalar_to_json<S>(x));
    return out;
}

template <class S>
json mat_json(const th::Mat<S>& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(vec_json<S>(row));
    return out;
}

template <class S>
json strategy_json(const th::EventTree<S>& tree, const th::MarketModel<S>& market,
                   const th::TransferPlan<S>& plan, const th::Vec<S>& initial) {
    json nodes = json::array();
    bool all_market = true;
    for (const auto& cone : market.cones) all_market &= cone.from_market;
    std::vector<th::Mat<S>> eta;
    if (all_market) eta = th::extract_exchanges(tree, market, plan);
    for (int n = 0; n < tree.size(); ++n) {
        json jn;
        jn["id"] = tree.node(n).id;
        jn["time"] = tree.node(n).time;
        jn["xi"] = vec_json<S>(plan.xi[n]);
        jn["value"] = vec_json<S>(plan.value[n]);
        if (all_market) jn["eta"] = mat_json<S>(eta[n]);
        nodes.push_back(jn);
    }
    json out;
    out["initial"] = vec_json<S>(initial);
    out["nodes"] = nodes;
    return out;
}

template <class S>
json dual_json(const th::EventTree<S>& tree, const th::Mat<S>& z) {
    th::Mat<S> zbar = th::compute_zbar(tree, z);
    json nodes = json::array();
    for (int n = 0; n < tree.size(); ++n) {
        json jn;
        jn["id"] = tree.node(n).id;
        jn["z"] = vec_json<S>(z[n]);
        jn["zbar"] = vec_json<S>(zbar[n]);
        nodes.push_back(jn);
    }
    return json{{"nodes", nodes}};
}

template <class S>
struct Inputs {
    th::io::LoadedMarket<S> loaded;
    th::Claim<S> claim;
    bool has_claim = false;
    th::Vec<S> direction;
    th::lp::SolveOptions options;
};

template <class S>
Inputs<S> load_inputs(const Args& args, const json& market_json, bool need_claim) {
    Inputs<S> in;
    in.loaded = th::io::parse_market<S>(market_json);
    in.options.feas_tol = args.tol;
    in.options.pivot_tol = args.tol;
    if (need_claim) {
        if (args.claim_path.empty())
            th::fail(th::ErrorCode::ValidationError, "--claim is required for this command");
        in.claim = th::io::load_claim<S>(args.claim_path, in.loaded.tree,
                                         in.loaded.market.assets);
        in.has_claim = true;
    }
    if (!args.direction.empty())
        in.direction = parse_vector_arg<S>(args.direction, in.loaded.market.assets,
                                           "--direction");
    else
        in.direction = th::first_asset_direction<S>(in.loaded.market.assets);
    return in;
}

template <class S>
json run_price(const Inputs<S>& in) {
    auto result = th::superhedge_price_along(in.loaded.tree, in.loaded.market, in.claim,
                                             in.direction, in.options);
    th::Vec<S> initial(in.loaded.market.assets);
    for (int k = 0; k < in.loaded.market.assets; ++k)
        initial[k] = result.price * in.direction[k];
    json out;
    out["h_primal"] = th::io::scalar_to_json<S>(result.price);
    out["direction"] = vec_json<S>(in.direction);
    out["strategy"] = strategy_json<S>(in.loaded.tree, in.loaded.market, result.plan, initial);
    return out;
}

template <class S>
json run_dual(const Inputs<S>& in) {
    auto result = th::dual_price_along(in.loaded.tree, in.loaded.market, in.claim,
                                       in.direction, in.options);
    json out;
    out["h_dual"] = th::io::scalar_to_json<S>(result.value);
    out["direction"] = vec_json<S>(in.direction);
    out["dual_process"] = dual_json<S>(in.loaded.tree, result.process.z);
    return out;
}

template <class S>
json run_theta(const Inputs<S>& in, std::uint64_t cap) {
    auto result = th::theta_price(in.loaded.tree, in.loaded.market, in.claim, cap, in.options);
    json out;
    out["stopping_time_count"] = result.stopping_time_count;
    if (!result.has_value) {
        out["h_theta"] = nullptr;
        out["note"] = "no consistent price system; the stopping-time dual is vacuous";
        return out;
    }
    out["h_theta"] = th::io::scalar_to_json<S>(result.value);
    json stops = json::array();
    for (int n = 0; n < in.loaded.tree.size(); ++n)
        if (result.best.stop[n]) stops.push_back(in.loaded.tree.node(n).id);
    out["best_stop_nodes"] = stops;
    out["cps"] = dual_json<S>(in.loaded.tree, result.best_z);
    return out;
}

template <class S>
json run_gap(const Inputs<S>& in, std::uint64_t cap) {
    auto report = th::duality_gap_report(in.loaded.tree, in.loaded.market, in.claim, cap,
                                         in.options);
    json out;
    out["h_primal"] = th::io::scalar_to_json<S>(report.h_primal);
    out["h_dual"] = th::io::scalar_to_json<S>(report.h_dual);
    out["primal_dual_equal"] = report.primal_dual_equal;
    if (report.theta_available) {
        out["h_theta"] = th::io::scalar_to_json<S>(report.h_theta);
        out["gap"] = th::io::scalar_to_json<S>(report.gap);
    } else {
        out["h_theta"] = nullptr;
        out["gap"] = nullptr;
    }
    out["stopping_time_count"] = report.stopping_time_count;
    th::Vec<S> initial(in.loaded.market.assets, S(0));
    initial[0] = report.h_primal;
    out["strategy"] =
        strategy_json<S>(in.loaded.tree, in.loaded.market, report.plan, initial);
    out["dual_process"] = dual_json<S>(in.loaded.tree, report.dual.z);
    return out;
}

template <class S>
json run_na_check(const Inputs<S>& in) {
    auto result = th::strictly_positive_cps(in.loaded.tree, in.loaded.market, in.options);
    json out;
    out["epsilon"] = th::io::scalar_to_json<S>(result.epsilon);
    if (result.process.has_value()) {
        out["note"] = "strictly positive dual process found";
        out["certificate"] = dual_json<S>(in.loaded.tree, result.process->z);
    } else {
        out["note"] = "no strictly positive dual process exists; arbitrage detected";
        out["certificate"] = nullptr;
    }
    return out;
}

template <class S>
json run_convert(const Inputs<S>& in) {
    auto dual = th::dual_price(in.loaded.tree, in.loaded.market, in.claim, in.options);
    auto bands = th::two_asset_bands(in.loaded.tree, in.loaded.market);
    auto nm = th::z_to_node_measure(in.loaded.tree, in.loaded.market, dual.process.z,
                                    in.options);
    auto rs = th::node_measure_to_randomized(in.loaded.tree, bands, nm, in.options.feas_tol);
    json out;
    out["h_dual"] = th::io::scalar_to_json<S>(dual.value);
    out["dual_process"] = dual_json<S>(in.loaded.tree, dual.process.z);
    json jnm = json::array();
    json jrs = json::array();
    for (int n = 0; n < in.loaded.tree.size(); ++n) {
        jnm.push_back(json{{"id", in.loaded.tree.node(n).id},
                           {"q", th::io::scalar_to_json<S>(nm.q[n])},
                           {"chi", th::io::scalar_to_json<S>(nm.chi[n])},
                           {"support", static_cast<bool>(nm.support[n])}});
        jrs.push_back(json{{"id", in.loaded.tree.node(n).id},
                           {"x", th::io::scalar_to_json<S>(rs.x[n])},
                           {"h", th::io::scalar_to_json<S>(rs.h[n])},
                           {"chi", th::io::scalar_to_json<S>(rs.chi[n])}});
    }
    out["node_measure"] = jnm;
    out["randomized_stop"] = jrs;
    out["value_node_measure"] =
        th::io::scalar_to_json<S>(th::node_measure_value(in.loaded.tree, bands, nm, in.claim));
    out["value_randomized"] =
        th::io::scalar_to_json<S>(th::randomized_value(in.loaded.tree, bands, rs, in.claim));
    return out;
}

template <class S>
json run_counterexample(const Inputs<S>& in, const Args& args, std::uint64_t cap) {
    if (args.x.empty())
        th::fail(th::ErrorCode::ValidationError, "--x is required for this command");
    th::Vec<S> x = parse_vector_arg<S>(args.x, in.loaded.market.assets, "--x");
    auto claim = th::build_counterexample_claim(in.loaded.tree, in.loaded.market, x,
                                                in.options);
    auto conds = th::check_counterexample_conditions(in.loaded.tree, in.loaded.market, x,
                                                     in.options);
    auto report = th::duality_gap_report(in.loaded.tree, in.loaded.market, claim, cap,
                                         in.options);
    json out;
    out["x"] = vec_json<S>(x);
    out["c0"] = th::io::scalar_to_json<S>(
        th::constitution_value(in.loaded.market.cone(in.loaded.tree.root()), x, in.options));
    out["claim"] = th::io::claim_to_json<S>(in.loaded.tree, claim);
    out["conditions"] = json{{"cond_ii", conds.cond_ii},
                             {"cond_i_sufficient", conds.cond_i_sufficient}};
    out["h_primal"] = th::io::scalar_to_json<S>(report.h_primal);
    out["h_dual"] = th::io::scalar_to_json<S>(report.h_dual);
    if (report.theta_available) {
        out["h_theta"] = th::io::scalar_to_json<S>(report.h_theta);
        out["gap"] = th::io::scalar_to_json<S>(report.gap);
    } else {
        out["h_theta"] = nullptr;
        out["gap"] = nullptr;
    }
    return out;
}

template <class S>
json run_tighten(const Inputs<S>& in) {
    json nodes = json::array();
    bool changed = false;
    for (int n = 0; n < in.loaded.tree.size(); ++n) {
        const auto& cone = in.loaded.market.cone(n);
        if (!cone.from_market)
            th::fail(th::ErrorCode::NotMarketCone,
                     "tighten requires cost-based market nodes");
        th::Mat<S> tightened = th::tighten_costs(cone.costs, cone.prices);
        bool node_changed = tightened != cone.costs;
        changed |= node_changed;
        nodes.push_back(json{{"id", in.loaded.tree.node(n).id},
                             {"changed", node_changed},
                             {"costs", mat_json<S>(cone.costs)},
                             {"tightened", mat_json<S>(tightened)}});
    }
    json out;
    out["changed"] = changed;
    out["nodes"] = nodes;
    return out;
}

template <class S>
json dispatch(const Args& args, const json& market_json) {
    bool need_claim = args.command == "price" || args.command == "dual" ||
                      args.command == "theta" || args.command == "gap" ||
                      args.command == "convert";
    Inputs<S> in = load_inputs<S>(args, market_json, need_claim);
    json out;
    if (args.command == "price")
        out = run_price<S>(in);
    else if (args.command == "dual")
        out = run_dual<S>(in);
    else if (args.command == "theta")
        out = run_theta<S>(in, args.theta_cap);
    else if (args.command == "gap")
        out = run_gap<S>(in, args.theta_cap);
    else if (args.command == "na-check")
        out = run_na_check<S>(in);
    else if (args.command == "convert")
        out = run_convert<S>(in);
    else if (args.command == "counterexample")
        out = run_counterexample<S>(in, args, args.theta_cap);
    else if (args.command == "tighten")
        out = run_tighten<S>(in);
    if (!in.loaded.warnings.empty()) out["warnings"] = in.loaded.warnings;
    return out;
}

void add_common(CLI::App* cmd, Args& args, bool with_claim, bool with_x) {
    cmd->add_option("--market", args.market_path, "market file (JSON)")->required();
    if (with_claim) cmd->add_option("--claim", args.claim_path, "claim file (JSON)");
    cmd->add_option("--mode", args.mode, "scalar mode: rational|float")
        ->check(CLI::IsMember({"rational", "float"}));
    cmd->add_option("--tol", args.tol, "feasibility tolerance (float mode)");
    cmd->add_option("--output", args.output, "output format: table|json")
        ->check(CLI::IsMember({"table", "json"}));
    cmd->add_option("--theta-cap", args.theta_cap, "stopping-time enumeration cap");
    cmd->add_option("--direction", args.direction,
                    "initial endowment direction, comma separated");
    if (with_x) cmd->add_option("--x", args.x, "position vector, comma separated");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"super-hedging prices of American claims under proportional "
                 "transaction costs on finite event trees"};
    app.require_subcommand(1);

    Args args;
    const char* commands[] = {"price",    "dual",    "theta",          "gap",
                              "na-check", "convert", "counterexample", "tighten"};
    const char* blurbs[] = {
        "minimal super-hedging price and a witness strategy",
        "dual price and the optimal dual process",
        "stopping-time dual price",
        "all three prices and the duality gap",
        "strictly positive dual process search",
        "dual optimum converted to node-measure and randomized-stop form",
        "build the constitution-value claim for --x and price it",
        "effective transaction costs after routing through asset chains"};
    for (std::size_t i = 0; i < 8; ++i) {
        CLI::App* cmd = app.add_subcommand(commands[i], blurbs[i]);
        bool with_claim = std::string(commands[i]) != "na-check" &&
                          std::string(commands[i]) != "counterexample" &&
                          std::string(commands[i]) != "tighten";
        add_common(cmd, args, with_claim, std::string(commands[i]) == "counterexample");
        cmd->callback([&args, name = std::string(commands[i])]() { args.command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    bool json_output = args.output == "json";
    try {
        json market_json = th::io::load_json_file(args.market_path);
        std::string mode = args.mode;
        if (mode.empty() && market_json.is_object() && market_json.contains("mode") &&
            market_json["mode"].is_string())
            mode = market_json["mode"].get<std::string>();
        if (mode.empty()) mode = "rational";
        if (mode != "rational" && mode != "float")
            th::fail(th::ErrorCode::SchemaError, "mode must be 'rational' or 'float'");

        json out = mode == "rational" ? dispatch<th::Rational>(args, market_json)
                                      : dispatch<double>(args, market_json);
        out["mode"] = mode;
        if (json_output)
            std::cout << out.dump(2) << "\n";
        else
            std::cout << th::io::render_table(out);
        return 0;
    } catch (const th::Error& e) {
        if (json_output)
            std::cout << th::io::error_to_json(e).dump(2) << "\n";
        else
            std::cerr << "error [" << th::error_code_name(e.code()) << "]: " << e.what()
                      << "\n";
        return th::is_validation_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        if (json_output)
            std::cout << json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(2)
                      << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
