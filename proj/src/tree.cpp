#include "treehedge/tree.hpp"

#include <algorithm>
#include <string>

namespace treehedge {

namespace {

constexpr double kProbSumTol = 1e-12;

}  // namespace

template <class S>
EventTree<S> EventTree<S>::build(std::vector<TreeNodeRecord<S>> records) {
    if (records.empty())
        fail(ErrorCode::ValidationError, "tree has no nodes");

    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });

    EventTree<S> tree;
    tree.nodes_.reserve(records.size());
    tree.by_id_.reserve(records.size());

    int roots = 0;
    for (const auto& rec : records) {
        if (tree.by_id_.count(rec.id))
            fail(ErrorCode::ValidationError,
                 "duplicate node id " + std::to_string(rec.id));
        if (fuzzy_sign(rec.prob, 0.0) <= 0)
            fail(ErrorCode::NonPositiveProbability,
                 "node " + std::to_string(rec.id) + " has non-positive probability");

        Node node;
        node.id = rec.id;
        node.time = rec.time;
        node.prob = rec.prob;
        if (!rec.parent.has_value()) {
            if (rec.time != 0)
                fail(ErrorCode::OrphanNode,
                     "node " + std::to_string(rec.id) + " has no parent but time > 0");
            ++roots;
            node.parent = -1;
        } else {
            auto it = tree.by_id_.find(*rec.parent);
            if (it == tree.by_id_.end())
                fail(ErrorCode::OrphanNode,
                     "node " + std::to_string(rec.id) + " references unknown parent " +
                         std::to_string(*rec.parent));
            node.parent = it->second;
            if (tree.nodes_[node.parent].time + 1 != rec.time)
                fail(ErrorCode::OrphanNode,
                     "node " + std::to_string(rec.id) + " is not one step after its parent");
        }
        tree.by_id_.emplace(rec.id, static_cast<int>(tree.nodes_.size()));
        tree.nodes_.push_back(std::move(node));
    }
    if (roots != 1)
        fail(ErrorCode::ValidationError, "tree must have exactly one root at time 0");
    if (tree.nodes_[0].parent != -1)
        fail(ErrorCode::ValidationError, "root must come first");

    const int n = tree.size();
    tree.children_.assign(n, {});
    for (int i = 0; i < n; ++i)
        if (tree.nodes_[i].parent >= 0) tree.children_[tree.nodes_[i].parent].push_back(i);

    tree.horizon_ = 0;
    for (const auto& node : tree.nodes_) tree.horizon_ = std::max(tree.horizon_, node.time);
    if (tree.horizon_ < 1)
        fail(ErrorCode::ValidationError, "horizon must be at least 1");

    for (int i = 0; i < n; ++i) {
        if (tree.children_[i].empty()) {
            if (tree.nodes_[i].time != tree.horizon_)
                fail(ErrorCode::LeafBeforeHorizon,
                     "node " + std::to_string(tree.nodes_[i].id) +
                         " is a leaf before the horizon");
            tree.leaves_.push_back(i);
        } else {
            S sum = S(0);
            for (int c : tree.children_[i]) sum += tree.nodes_[c].prob;
            bool ok;
            if constexpr (is_exact_scalar_v<S>) {
                ok = sum == S(1);
            } else {
                ok = std::fabs(sum - 1.0) <= kProbSumTol;
            }
            if (!ok)
                fail(ErrorCode::ProbabilityNotNormalized,
                     "children of node " + std::to_string(tree.nodes_[i].id) +
                         " have probabilities not summing to 1");
        }
    }
    if (fuzzy_sign(tree.nodes_[0].prob - S(1), kProbSumTol) != 0)
        fail(ErrorCode::ProbabilityNotNormalized, "root probability must be 1");

    tree.path_prob_.assign(n, S(1));
    for (int i = 0; i < n; ++i) {
        const auto& node = tree.nodes_[i];
        tree.path_prob_[i] = node.parent < 0 ? node.prob
                                             : tree.path_prob_[node.parent] * node.prob;
    }
    return tree;
}

template <class S>
int EventTree<S>::index_of(std::int64_t id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        fail(ErrorCode::UnknownNode, "unknown node id " + std::to_string(id));
    return it->second;
}

template <class S>
std::vector<int> EventTree<S>::subtree(int idx) const {
    std::vector<int> out;
    out.push_back(idx);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (int c : children_[out[k]]) out.push_back(c);
    return out;
}

template <class S>
bool is_valid_stopping_time(const EventTree<S>& tree, const StoppingTime& st) {
    if (static_cast<int>(st.stop.size()) != tree.size()) return false;
    for (int leaf : tree.leaves()) {
        int marks = 0;
        for (int n = leaf; n >= 0; n = tree.node(n).parent)
            if (st.stop[n]) ++marks;
        if (marks != 1) return false;
    }
    return true;
}

template <class S>
std::uint64_t count_stopping_times(const EventTree<S>& tree, std::uint64_t cap) {
    const std::uint64_t limit = cap + 1;
    // saturating product over children, bottom-up
    std::vector<std::uint64_t> count(tree.size(), 1);
    for (int i = tree.size() - 1; i >= 0; --i) {
        if (tree.is_leaf(i)) continue;
        std::uint64_t prod = 1;
        for (int c : tree.children(i)) {
            if (prod > limit / std::max<std::uint64_t>(count[c], 1)) {
                prod = limit;
                break;
            }
            prod *= count[c];
        }
        count[i] = std::min(limit, prod + 1);
    }
    return count[tree.root()];
}

namespace {

// Enumerates subtree stopping rules as lists of flag vectors, smallest trees
// first. The cartesian product across siblings is materialized explicitly;
// the cap guard runs before any allocation.
template <class S>
std::vector<std::vector<char>> subtree_rules(const EventTree<S>& tree, int node) {
    std::vector<std::vector<char>> rules;
    std::vector<char> here(tree.size(), 0);
    here[node] = 1;
    rules.push_back(std::move(here));
    if (tree.is_leaf(node)) return rules;

    std::vector<std::vector<std::vector<char>>> per_child;
    per_child.reserve(tree.children(node).size());
    for (int c : tree.children(node)) per_child.push_back(subtree_rules(tree, c));

    std::vector<std::size_t> pick(per_child.size(), 0);
    for (;;) {
        std::vector<char> merged(tree.size(), 0);
        for (std::size_t k = 0; k < per_child.size(); ++k) {
            const auto& part = per_child[k][pick[k]];
            for (int i = 0; i < tree.size(); ++i) merged[i] |= part[i];
        }
        rules.push_back(std::move(merged));
        std::size_t k = 0;
        while (k < pick.size()) {
            if (++pick[k] < per_child[k].size()) break;
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size()) break;
    }
    return rules;
}

}  // namespace

template <class S>
std::vector<StoppingTime> enumerate_stopping_times(const EventTree<S>& tree,
                                                   std::uint64_t cap) {
    std::uint64_t total = count_stopping_times(tree, cap);
    if (total > cap)
        fail(ErrorCode::EnumerationCapExceeded,
             "tree admits more than " + std::to_string(cap) + " stopping times");
    std::vector<std::vector<char>> rules = subtree_rules(tree, tree.root());
    std::vector<StoppingTime> out;
    out.reserve(rules.size());
    for (auto& flags : rules) out.push_back(StoppingTime{std::move(flags)});
    return out;
}

template class EventTree<Rational>;
template class EventTree<double>;
template bool is_valid_stopping_time(const EventTree<Rational>&, const StoppingTime&);
template bool is_valid_stopping_time(const EventTree<double>&, const StoppingTime&);
template std::uint64_t count_stopping_times(const EventTree<Rational>&, std::uint64_t);
template std::uint64_t count_stopping_times(const EventTree<double>&, std::uint64_t);
template std::vector<StoppingTime> enumerate_stopping_times(const EventTree<Rational>&,
                                                            std::uint64_t);
template std::vector<StoppingTime> enumerate_stopping_times(const EventTree<double>&,
                                                            std::uint64_t);

}  // namespace treehedge
