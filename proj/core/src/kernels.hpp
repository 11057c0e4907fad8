#pragma once

// Shared evaluation kernels for the query and solver translation units.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "spnmap/network.hpp"

namespace spnmap::detail {

/// Per-variable query state: a category, or kFree for "summed out".
using VarState = std::int64_t;
inline constexpr VarState kFree = -1;

inline double leaf_log_value(const Network& net, NodeId leaf, VarState state) {
  if (state == kFree) return 0.0;
  const auto log_dist = net.log_distribution(leaf);
  const auto k = static_cast<std::size_t>(state);
  return k < log_dist.size() ? log_dist[k] : kLogZero;
}

/// Combines already-computed child values of an internal node.
template <typename ChildValue>
double combine(const Network& net, NodeId id, ChildValue&& child_value) {
  const Node& n = net.node(id);
  if (n.kind == NodeKind::kProduct) {
    double acc = 0.0;
    for (NodeId c : n.children) acc += child_value(c);
    return acc;
  }
  const auto lw = net.log_weights(id);
  double hi = kLogZero;
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    hi = std::max(hi, lw[j] + child_value(n.children[j]));
  }
  if (hi == kLogZero) return kLogZero;
  double acc = 0.0;
  for (std::size_t j = 0; j < n.children.size(); ++j) {
    acc += std::exp(lw[j] + child_value(n.children[j]) - hi);
  }
  return hi + std::log(acc);
}

/// Evaluates every reachable node bottom-up. `out` is indexed by node id.
inline void upward(const Network& net, std::span<const VarState> state, std::vector<double>& out) {
  out.assign(net.size(), kLogZero);
  for (NodeId id : net.topological_order()) {
    const Node& n = net.node(id);
    if (n.kind == NodeKind::kLeaf) {
      out[id] = leaf_log_value(net, id, state[n.variable]);
    } else {
      out[id] = combine(net, id, [&](NodeId c) { return out[c]; });
    }
  }
}

/// Evaluates the sub-network under a single node, touching only its
/// descendants. Memo slots are invalidated by bumping an epoch counter, so
/// repeated calls cost time proportional to the sub-network, not the network.
class SubnetEvaluator {
 public:
  explicit SubnetEvaluator(const Network& net)
      : net_(net), value_(net.size(), kLogZero), stamp_(net.size(), 0) {}

  double evaluate(NodeId start, std::span<const VarState> state) {
    ++epoch_;
    stack_.clear();
    stack_.push_back(start);
    while (!stack_.empty()) {
      const NodeId id = stack_.back();
      if (stamp_[id] == epoch_) {
        stack_.pop_back();
        continue;
      }
      const Node& n = net_.node(id);
      if (n.kind == NodeKind::kLeaf) {
        value_[id] = leaf_log_value(net_, id, state[n.variable]);
        stamp_[id] = epoch_;
        stack_.pop_back();
        continue;
      }
      bool ready = true;
      for (NodeId c : n.children) {
        if (stamp_[c] != epoch_) {
          stack_.push_back(c);
          ready = false;
        }
      }
      if (!ready) continue;
      value_[id] = combine(net_, id, [&](NodeId c) { return value_[c]; });
      stamp_[id] = epoch_;
      stack_.pop_back();
    }
    return value_[start];
  }

 private:
  const Network& net_;
  std::vector<double> value_;
  std::vector<std::uint64_t> stamp_;
  std::vector<NodeId> stack_;
  std::uint64_t epoch_ = 0;
};

}  // namespace spnmap::detail
