#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "treehedge/randomization.hpp"

namespace treehedge::io {

using nlohmann::json;

/// Market file, version "1". Each node record carries the tree fields plus
/// exactly one cone description:
///   prices + costs      currency market (costs are the proportional rates)
///   prices + rates      raw exchange-rate matrix (may encode cycles)
///   generators          cone given by its generators directly
/// Rational mode accepts integers and quoted numbers ("1/10", "0.25"); bare
/// fractional JSON numbers are rejected there to keep files exact.
template <class S>
struct LoadedMarket {
    EventTree<S> tree;
    MarketModel<S> market;
    bool tighten_changes = false;  // effective rates differ from the quoted ones
    std::vector<std::string> warnings;
};

template <class S>
LoadedMarket<S> parse_market(const json& j);

template <class S>
LoadedMarket<S> load_market(const std::string& path);

template <class S>
json market_to_json(const EventTree<S>& tree, const MarketModel<S>& market);

/// Claim file: {"version":"1","payoffs":[{"id":...,"vector":[...]}]}. Every
/// tree node must be covered exactly once.
template <class S>
Claim<S> parse_claim(const json& j, const EventTree<S>& tree, int assets);

template <class S>
Claim<S> load_claim(const std::string& path, const EventTree<S>& tree, int assets);

template <class S>
json claim_to_json(const EventTree<S>& tree, const Claim<S>& claim);

template <class S>
json scalar_to_json(const S& value);

json load_json_file(const std::string& path);

/// Plain-text rendering of a report; walks the same json payload the json
/// output prints, so both carry identical numbers.
std::string render_table(const json& payload);

json error_to_json(const Error& error);

}  // namespace treehedge::io
