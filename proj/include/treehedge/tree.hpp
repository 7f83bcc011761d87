#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "treehedge/errors.hpp"
#include "treehedge/scalar.hpp"

namespace treehedge {

template <class S>
struct TreeNodeRecord {
    std::int64_t id = 0;
    int time = 0;
    std::optional<std::int64_t> parent;  // absent for the root
    S prob = S(1);                       // conditional branch probability
};

/// Finite event tree over times 0..horizon. Nodes are stored parent-before-
/// child and addressed by dense index; the external ids from the input are
/// kept for file round trips. Immutable after construction.
template <class S>
class EventTree {
  public:
    struct Node {
        std::int64_t id = 0;
        int time = 0;
        int parent = -1;  // dense index, -1 for the root
        S prob = S(1);
    };

    static EventTree build(std::vector<TreeNodeRecord<S>> records);

    int horizon() const { return horizon_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    int root() const { return 0; }
    const Node& node(int idx) const { return nodes_[idx]; }
    const std::vector<int>& children(int idx) const { return children_[idx]; }
    bool is_leaf(int idx) const { return children_[idx].empty(); }
    const std::vector<int>& leaves() const { return leaves_; }

    /// Unconditional probability of reaching the node (product of branch
    /// probabilities along the root path).
    const S& node_probability(int idx) const { return path_prob_[idx]; }

    int index_of(std::int64_t id) const;
    bool has_id(std::int64_t id) const { return by_id_.count(id) > 0; }

    /// Nodes of the subtree rooted at idx (preorder, includes idx).
    std::vector<int> subtree(int idx) const;

  private:
    int horizon_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> children_;
    std::vector<int> leaves_;
    std::vector<S> path_prob_;
    std::unordered_map<std::int64_t, int> by_id_;
};

/// An exercise rule: `stop[idx]` marks the nodes where stopping occurs. Valid
/// rules mark exactly one node on every root-to-leaf path.
struct StoppingTime {
    std::vector<char> stop;
};

template <class S>
bool is_valid_stopping_time(const EventTree<S>& tree, const StoppingTime& st);

/// Number of stopping times of the tree: 1 at a leaf, 1 + product over
/// children elsewhere. Saturates at cap+1 to keep the guard cheap.
template <class S>
std::uint64_t count_stopping_times(const EventTree<S>& tree, std::uint64_t cap);

inline constexpr std::uint64_t kDefaultStoppingTimeCap = 100000;

/// All stopping times of the tree. Throws Error(EnumerationCapExceeded) when
/// the count is above `cap`.
template <class S>
std::vector<StoppingTime> enumerate_stopping_times(
    const EventTree<S>& tree, std::uint64_t cap = kDefaultStoppingTimeCap);

}  // namespace treehedge
