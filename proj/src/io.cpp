#include "treehedge/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace treehedge::io {

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    fail(ErrorCode::SchemaError, where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) schema_fail(where, std::string("missing field '") + key + "'");
    return *it;
}

template <class S>
S parse_scalar(const json& v, const std::string& where) {
    if (v.is_string()) {
        try {
            Rational r = rational_from_string(v.get<std::string>());
            return scalar_from_rational<S>(r);
        } catch (const Error&) {
            schema_fail(where, "cannot parse '" + v.get<std::string>() + "' as a number");
        }
    }
    if (v.is_number_integer()) return S(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_number_float()) {
        if constexpr (is_exact_scalar_v<S>) {
            schema_fail(where,
                        "fractional JSON numbers are not exact; quote the value "
                        "(e.g. \"1/10\" or \"0.1\") in rational mode");
        } else {
            return v.get<double>();
        }
    }
    schema_fail(where, "expected a number");
}

template <class S>
Vec<S> parse_vector(const json& v, int dim, const std::string& where) {
    if (!v.is_array()) schema_fail(where, "expected an array");
    if (dim >= 0 && static_cast<int>(v.size()) != dim)
        schema_fail(where, "expected " + std::to_string(dim) + " entries");
    Vec<S> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_scalar<S>(v[i], where + "/" + std::to_string(i)));
    return out;
}

template <class S>
Mat<S> parse_matrix(const json& v, int rows, int cols, const std::string& where) {
    if (!v.is_array()) schema_fail(where, "expected an array of arrays");
    if (rows >= 0 && static_cast<int>(v.size()) != rows)
        schema_fail(where, "expected " + std::to_string(rows) + " rows");
    Mat<S> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_vector<S>(v[i], cols, where + "/" + std::to_string(i)));
    return out;
}

template <class S>
SolvencyCone<S> cone_from_rates(const Vec<S>& prices, const Mat<S>& rates) {
    const int d = static_cast<int>(prices.size());
    SolvencyCone<S> cone;
    cone.dim = d;
    cone.from_market = true;
    cone.prices = prices;
    cone.costs.assign(d, Vec<S>(d, S(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) cone.costs[i][j] = rates[i][j] * prices[i] / prices[j] - S(1);
    for (int i = 0; i < d; ++i) {
        Vec<S> e(d, S(0));
        e[i] = S(1);
        cone.generators.push_back(std::move(e));
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            if (fuzzy_sign(rates[i][j], 0.0) <= 0)
                fail(ErrorCode::ValidationError, "exchange rates must be positive");
            Vec<S> g(d, S(0));
            g[i] = rates[i][j];
            g[j] = S(-1);
            cone.generators.push_back(std::move(g));
        }
    return cone;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::SchemaError, "cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::SchemaError, path + ": " + e.what());
    }
}

template <class S>
LoadedMarket<S> parse_market(const json& j) {
    const std::string root = "/";
    if (!j.is_object()) schema_fail(root, "market file must be a JSON object");
    std::string version = need(j, "version", root).get<std::string>();
    if (version != "1") schema_fail("/version", "unsupported version '" + version + "'");
    const json& jassets = need(j, "assets", root);
    if (!jassets.is_number_integer()) schema_fail("/assets", "expected an integer");
    const int d = jassets.get<int>();
    if (d < 2) schema_fail("/assets", "need at least two assets");
    const json& jnodes = need(j, "nodes", root);
    if (!jnodes.is_array() || jnodes.empty()) schema_fail("/nodes", "expected a non-empty array");

    std::vector<TreeNodeRecord<S>> records;
    struct ConeSpec {
        std::int64_t id;
        std::optional<Vec<S>> prices;
        std::optional<Mat<S>> costs;
        std::optional<Mat<S>> rates;
        std::optional<Mat<S>> generators;
    };
    std::vector<ConeSpec> cone_specs;

    for (std::size_t i = 0; i < jnodes.size(); ++i) {
        const std::string where = "/nodes/" + std::to_string(i);
        const json& jn = jnodes[i];
        if (!jn.is_object()) schema_fail(where, "expected an object");
        TreeNodeRecord<S> rec;
        const json& jid = need(jn, "id", where);
        if (!jid.is_number_integer()) schema_fail(where + "/id", "expected an integer");
        rec.id = jid.get<std::int64_t>();
        const json& jtime = need(jn, "time", where);
        if (!jtime.is_number_integer()) schema_fail(where + "/time", "expected an integer");
        rec.time = jtime.get<int>();
        const json& jparent = need(jn, "parent", where);
        if (jparent.is_null()) {
            rec.parent = std::nullopt;
        } else if (jparent.is_number_integer()) {
            rec.parent = jparent.get<std::int64_t>();
        } else {
            schema_fail(where + "/parent", "expected an integer or null");
        }
        rec.prob = parse_scalar<S>(need(jn, "prob", where), where + "/prob");
        records.push_back(rec);

        ConeSpec spec;
        spec.id = rec.id;
        if (jn.contains("generators")) {
            spec.generators = parse_matrix<S>(jn["generators"], -1, d, where + "/generators");
        } else {
            spec.prices = parse_vector<S>(need(jn, "prices", where), d, where + "/prices");
            if (jn.contains("rates")) {
                spec.rates = parse_matrix<S>(jn["rates"], d, d, where + "/rates");
            } else {
                spec.costs =
                    parse_matrix<S>(need(jn, "costs", where), d, d, where + "/costs");
            }
        }
        cone_specs.push_back(std::move(spec));
    }

    LoadedMarket<S> loaded{EventTree<S>::build(std::move(records)), {}, false, {}};
    if (j.contains("horizon")) {
        const json& jh = j["horizon"];
        if (!jh.is_number_integer() || jh.get<int>() != loaded.tree.horizon())
            schema_fail("/horizon", "horizon does not match the node records");
    }

    loaded.market.assets = d;
    loaded.market.cones.resize(loaded.tree.size());
    for (const auto& spec : cone_specs) {
        int idx = loaded.tree.index_of(spec.id);
        if (spec.generators.has_value()) {
            loaded.market.cones[idx] = cone_from_generators<S>(d, *spec.generators);
        } else if (spec.rates.has_value()) {
            Mat<S> tightened = tighten_rates(*spec.rates);  // throws on a cycle
            if (tightened != *spec.rates) loaded.tighten_changes = true;
            loaded.market.cones[idx] = cone_from_rates(*spec.prices, *spec.rates);
        } else {
            loaded.market.cones[idx] = cone_from_market(*spec.prices, *spec.costs);
            Mat<S> tightened = tighten_costs(*spec.costs, *spec.prices);
            if (tightened != *spec.costs) loaded.tighten_changes = true;
        }
    }
    if (loaded.tighten_changes)
        loaded.warnings.push_back(
            "quoted costs violate the chain condition; effective rates are cheaper "
            "(prices are unaffected, see the tighten subcommand)");
    return loaded;
}

template <class S>
LoadedMarket<S> load_market(const std::string& path) {
    return parse_market<S>(load_json_file(path));
}

template <class S>
json scalar_to_json(const S& value) {
    if constexpr (is_exact_scalar_v<S>) {
        return json(rational_to_string(value));
    } else {
        return json(value);
    }
}

template <class S>
json market_to_json(const EventTree<S>& tree, const MarketModel<S>& market) {
    json nodes = json::array();
    for (int n = 0; n < tree.size(); ++n) {
        const auto& node = tree.node(n);
        json jn;
        jn["id"] = node.id;
        jn["time"] = node.time;
        if (node.parent < 0)
            jn["parent"] = nullptr;
        else
            jn["parent"] = tree.node(node.parent).id;
        jn["prob"] = scalar_to_json<S>(node.prob);
        const auto& cone = market.cone(n);
        if (cone.from_market) {
            json prices = json::array();
            for (const S& p : cone.prices) prices.push_back(scalar_to_json<S>(p));
            jn["prices"] = prices;
            bool plain_costs = true;
            for (const auto& row : cone.costs)
                for (const S& c : row)
                    if (fuzzy_sign(c, 0.0) < 0) plain_costs = false;
            if (plain_costs) {
                json costs = json::array();
                for (const auto& row : cone.costs) {
                    json jrow = json::array();
                    for (const S& c : row) jrow.push_back(scalar_to_json<S>(c));
                    costs.push_back(jrow);
                }
                jn["costs"] = costs;
            } else {
                // a raw-rate market can quote one leg cheaper than the price
                // ratio; only the rate form reloads then
                json rates = json::array();
                for (int i = 0; i < cone.dim; ++i) {
                    json jrow = json::array();
                    for (int j = 0; j < cone.dim; ++j) {
                        S rate = i == j ? S(1)
                                        : (S(1) + cone.costs[i][j]) * cone.prices[j] /
                                              cone.prices[i];
                        jrow.push_back(scalar_to_json<S>(rate));
                    }
                    rates.push_back(jrow);
                }
                jn["rates"] = rates;
            }
        } else {
            json gens = json::array();
            for (const auto& g : cone.generators) {
                json jg = json::array();
                for (const S& v : g) jg.push_back(scalar_to_json<S>(v));
                gens.push_back(jg);
            }
            jn["generators"] = gens;
        }
        nodes.push_back(jn);
    }
    json out;
    out["version"] = "1";
    out["assets"] = market.assets;
    out["horizon"] = tree.horizon();
    out["nodes"] = nodes;
    return out;
}

template <class S>
Claim<S> parse_claim(const json& j, const EventTree<S>& tree, int assets) {
    if (!j.is_object()) schema_fail("/", "claim file must be a JSON object");
    std::string version = need(j, "version", "/").get<std::string>();
    if (version != "1") schema_fail("/version", "unsupported version '" + version + "'");
    const json& jp = need(j, "payoffs", "/");
    if (!jp.is_array()) schema_fail("/payoffs", "expected an array");

    Claim<S> claim = zero_claim(tree, assets);
    std::set<int> covered;
    for (std::size_t i = 0; i < jp.size(); ++i) {
        const std::string where = "/payoffs/" + std::to_string(i);
        const json& je = jp[i];
        if (!je.is_object()) schema_fail(where, "expected an object");
        const json& jid = need(je, "id", where);
        if (!jid.is_number_integer()) schema_fail(where + "/id", "expected an integer");
        std::int64_t id = jid.get<std::int64_t>();
        if (!tree.has_id(id))
            fail(ErrorCode::UnknownNode,
                 where + ": node id " + std::to_string(id) + " is not in the tree");
        int idx = tree.index_of(id);
        if (!covered.insert(idx).second)
            schema_fail(where, "node id " + std::to_string(id) + " appears twice");
        claim.payoff[idx] =
            parse_vector<S>(need(je, "vector", where), assets, where + "/vector");
    }
    if (static_cast<int>(covered.size()) != tree.size()) {
        for (int n = 0; n < tree.size(); ++n)
            if (!covered.count(n))
                fail(ErrorCode::MissingNode,
                     "claim gives no payoff for node id " +
                         std::to_string(tree.node(n).id));
    }
    return claim;
}

template <class S>
Claim<S> load_claim(const std::string& path, const EventTree<S>& tree, int assets) {
    return parse_claim<S>(load_json_file(path), tree, assets);
}

template <class S>
json claim_to_json(const EventTree<S>& tree, const Claim<S>& claim) {
    json payoffs = json::array();
    for (int n = 0; n < tree.size(); ++n) {
        json je;
        je["id"] = tree.node(n).id;
        json vec = json::array();
        for (const S& v : claim.payoff[n]) vec.push_back(scalar_to_json<S>(v));
        je["vector"] = vec;
        payoffs.push_back(je);
    }
    json out;
    out["version"] = "1";
    out["payoffs"] = payoffs;
    return out;
}

namespace {

void render_value(std::ostringstream& out, const json& v, int indent);

void render_object(std::ostringstream& out, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (auto it = v.begin(); it != v.end(); ++it) {
        out << pad << it.key() << ": ";
        if (it->is_object() || (it->is_array() && !it->empty() &&
                                (it->front().is_object() || it->front().is_array()))) {
            out << "\n";
            render_value(out, *it, indent + 1);
        } else {
            render_value(out, *it, 0);
            out << "\n";
        }
    }
}

void render_value(std::ostringstream& out, const json& v, int indent) {
    if (v.is_object()) {
        render_object(out, v, indent);
    } else if (v.is_array()) {
        if (!v.empty() && (v.front().is_object() || v.front().is_array())) {
            const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
            for (std::size_t i = 0; i < v.size(); ++i) {
                out << pad << "- ";
                if (v[i].is_object()) {
                    out << "\n";
                    render_value(out, v[i], indent + 1);
                } else {
                    render_value(out, v[i], 0);
                    out << "\n";
                }
            }
        } else {
            out << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ", ";
                render_value(out, v[i], 0);
            }
            out << "]";
        }
    } else if (v.is_string()) {
        out << v.get<std::string>();
    } else {
        out << v.dump();
    }
}

}  // namespace

std::string render_table(const json& payload) {
    std::ostringstream out;
    render_value(out, payload, 0);
    return out.str();
}

json error_to_json(const Error& error) {
    json out;
    out["error"] = {{"code", error_code_name(error.code())}, {"message", error.what()}};
    return out;
}

#define TREEHEDGE_INSTANTIATE_IO(S)                                                     \
    template struct LoadedMarket<S>;                                                    \
    template LoadedMarket<S> parse_market(const json&);                                 \
    template LoadedMarket<S> load_market(const std::string&);                           \
    template json market_to_json(const EventTree<S>&, const MarketModel<S>&);           \
    template Claim<S> parse_claim(const json&, const EventTree<S>&, int);               \
    template Claim<S> load_claim(const std::string&, const EventTree<S>&, int);         \
    template json claim_to_json(const EventTree<S>&, const Claim<S>&);                  \
    template json scalar_to_json(const S&);

TREEHEDGE_INSTANTIATE_IO(Rational)
TREEHEDGE_INSTANTIATE_IO(double)

#undef TREEHEDGE_INSTANTIATE_IO

}  // namespace treehedge::io
