#include "spnmap/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "kernels.hpp"

namespace spnmap {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSum: return "sum";
    case NodeKind::kProduct: return "prod";
    case NodeKind::kLeaf: return "leaf";
  }
  return "?";
}

const char* to_string(Property property) {
  switch (property) {
    case Property::kRoot: return "root";
    case Property::kAcyclic: return "acyclic";
    case Property::kReachable: return "reachable";
    case Property::kArity: return "arity";
    case Property::kComplete: return "complete";
    case Property::kDecomposable: return "decomposable";
    case Property::kNormalized: return "normalized";
    case Property::kLeafDistribution: return "leaf-distribution";
    case Property::kVariables: return "variables";
  }
  return "?";
}

std::optional<Category> Evidence::find(VarIndex var) const {
  auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool Evidence::consistent(const Assignment& x) const {
  return std::all_of(values_.begin(), values_.end(), [&](const auto& kv) {
    return kv.first < x.size() && x[kv.first] == kv.second;
  });
}

namespace {

enum class Mark : unsigned char { kWhite, kGrey, kBlack };

// Iterative DFS post-order from `start`. Returns false on reaching a grey node.
bool post_order(const std::vector<Node>& nodes, NodeId start, std::vector<Mark>& mark,
                std::vector<NodeId>& order, std::optional<NodeId>& cycle_at) {
  if (mark[start] != Mark::kWhite) return true;
  std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
  mark[start] = Mark::kGrey;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& children = nodes[id].children;
    if (next < children.size()) {
      const NodeId c = children[next++];
      if (mark[c] == Mark::kGrey) {
        cycle_at = c;
        return false;
      }
      if (mark[c] == Mark::kWhite) {
        mark[c] = Mark::kGrey;
        stack.emplace_back(c, 0);
      }
      continue;
    }
    mark[id] = Mark::kBlack;
    order.push_back(id);
    stack.pop_back();
  }
  return true;
}

}  // namespace

Network::Network(std::vector<Node> nodes, NodeId root) : nodes_(std::move(nodes)), root_(root) {
  if (nodes_.empty()) throw std::invalid_argument("network has no nodes");
  if (root_ >= nodes_.size()) throw std::invalid_argument("root id out of range");

  VarIndex var_count = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    for (NodeId c : n.children) {
      if (c >= nodes_.size()) {
        throw std::invalid_argument("node " + std::to_string(id) + " has child " + std::to_string(c) +
                                    " outside the node store");
      }
    }
    if (n.kind == NodeKind::kSum && n.weights.size() != n.children.size()) {
      throw std::invalid_argument("sum node " + std::to_string(id) + " has " +
                                  std::to_string(n.weights.size()) + " weights for " +
                                  std::to_string(n.children.size()) + " children");
    }
    if (n.kind == NodeKind::kLeaf) var_count = std::max<VarIndex>(var_count, n.variable + 1);
  }

  variables_.resize(var_count);
  for (VarIndex v = 0; v < var_count; ++v) variables_[v].index = v;
  log_params_.resize(nodes_.size());
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    if (n.kind == NodeKind::kSum) {
      // Extended precision keeps weights that already sum to one (up to
      // decimal rounding) unchanged.
      const long double total = std::accumulate(n.weights.begin(), n.weights.end(), 0.0L);
      const bool nonneg = std::all_of(n.weights.begin(), n.weights.end(), [](double w) { return w >= 0.0; });
      if (nonneg && total > 0.0L && total != 1.0L && std::abs(total - 1.0L) <= kWeightTolerance) {
        for (double& w : n.weights) w = static_cast<double>(w / total);
      }
      for (double w : n.weights) log_params_[id].push_back(w > 0.0 ? std::log(w) : kLogZero);
    } else if (n.kind == NodeKind::kLeaf) {
      for (double p : n.distribution) log_params_[id].push_back(p > 0.0 ? std::log(p) : kLogZero);
      auto& var = variables_[n.variable];
      const auto card = static_cast<std::uint32_t>(n.distribution.size());
      if (var.cardinality != 0 && var.cardinality != card) bad_cardinality_.push_back(n.variable);
      var.cardinality = std::max(var.cardinality, card);
    }
  }
  std::sort(bad_cardinality_.begin(), bad_cardinality_.end());
  bad_cardinality_.erase(std::unique(bad_cardinality_.begin(), bad_cardinality_.end()), bad_cardinality_.end());

  // Reachability holds regardless of cycles.
  reachable_.assign(nodes_.size(), 0);
  std::vector<NodeId> frontier{root_};
  reachable_[root_] = 1;
  while (!frontier.empty()) {
    const NodeId id = frontier.back();
    frontier.pop_back();
    for (NodeId c : nodes_[id].children) {
      if (!reachable_[c]) {
        reachable_[c] = 1;
        frontier.push_back(c);
      }
    }
  }

  std::vector<Mark> mark(nodes_.size(), Mark::kWhite);
  std::vector<NodeId> global_order;
  global_order.reserve(nodes_.size());
  if (!post_order(nodes_, root_, mark, reachable_order_, cycle_node_)) {
    acyclic_ = false;
  } else {
    global_order = reachable_order_;
    for (NodeId id = 0; id < nodes_.size() && acyclic_; ++id) {
      acyclic_ = post_order(nodes_, id, mark, global_order, cycle_node_);
    }
  }
  if (!acyclic_) {
    reachable_order_.clear();
    return;
  }

  scopes_.resize(nodes_.size());
  for (NodeId id : global_order) {
    const Node& n = nodes_[id];
    auto& s = scopes_[id];
    if (n.kind == NodeKind::kLeaf) {
      s.push_back(n.variable);
      continue;
    }
    for (NodeId c : n.children) s.insert(s.end(), scopes_[c].begin(), scopes_[c].end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

const Node& Network::node(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return nodes_[id];
}

const std::vector<VarIndex>& Network::scope(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  require_acyclic();
  return scopes_[id];
}

void Network::require_acyclic() const {
  if (!acyclic_) throw std::logic_error("network contains a directed cycle");
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;
  auto report = [&](NodeId id, Property p, std::string msg) { out.push_back({id, p, std::move(msg)}); };

  if (!net.is_acyclic()) {
    report(net.cycle_node().value_or(net.root()), Property::kAcyclic, "node lies on a directed cycle");
  }

  for (NodeId id = 0; id < net.size(); ++id) {
    const Node& n = net.node(id);
    if (!net.is_reachable(id)) report(id, Property::kReachable, "node is not reachable from the root");

    if (n.kind == NodeKind::kLeaf) {
      if (!n.children.empty()) report(id, Property::kArity, "leaf node has children");
      if (n.distribution.size() < 2) {
        report(id, Property::kLeafDistribution, "leaf distribution needs at least 2 categories");
      }
      const bool ok = std::all_of(n.distribution.begin(), n.distribution.end(),
                                  [](double p) { return std::isfinite(p) && p >= 0.0; });
      const double total = std::accumulate(n.distribution.begin(), n.distribution.end(), 0.0);
      if (!ok) {
        report(id, Property::kLeafDistribution, "leaf probabilities must be finite and nonnegative");
      } else if (std::abs(total - 1.0) > kLeafTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "leaf probabilities sum to " << total;
        report(id, Property::kLeafDistribution, msg.str());
      }
      continue;
    }

    if (n.children.empty()) {
      report(id, Property::kArity, std::string(to_string(n.kind)) + " node has no children");
    }
    if (n.kind == NodeKind::kSum) {
      const bool ok = std::all_of(n.weights.begin(), n.weights.end(),
                                  [](double w) { return std::isfinite(w) && w >= 0.0; });
      const double total = std::accumulate(n.weights.begin(), n.weights.end(), 0.0);
      if (!ok) {
        report(id, Property::kNormalized, "sum weights must be finite and nonnegative");
      } else if (!n.children.empty() && std::abs(total - 1.0) > kWeightTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "sum weights add up to " << total;
        report(id, Property::kNormalized, msg.str());
      }
    }
  }

  for (const Variable& v : net.variables()) {
    if (v.cardinality == 0) {
      report(net.root(), Property::kVariables, "variable " + std::to_string(v.index) + " has no leaf");
    }
  }
  for (VarIndex v : net.inconsistent_cardinalities()) {
    report(net.root(), Property::kVariables,
           "leaves of variable " + std::to_string(v) + " disagree on the number of categories");
  }

  if (!net.is_acyclic()) return out;

  for (NodeId id = 0; id < net.size(); ++id) {
    const Node& n = net.node(id);
    if (n.kind == NodeKind::kSum) {
      for (NodeId c : n.children) {
        if (net.scope(c) != net.scope(id)) {
          report(id, Property::kComplete,
                 "child " + std::to_string(c) + " scope differs from its sibling scopes");
          break;
        }
      }
    } else if (n.kind == NodeKind::kProduct) {
      std::size_t total = 0;
      for (NodeId c : n.children) total += net.scope(c).size();
      if (total != net.scope(id).size()) {
        report(id, Property::kDecomposable, "children have overlapping scopes");
      }
    }
  }

  const auto& root_scope = net.scope(net.root());
  if (root_scope.size() != net.variable_count()) {
    for (const Variable& v : net.variables()) {
      if (v.cardinality != 0 && !std::binary_search(root_scope.begin(), root_scope.end(), v.index)) {
        report(net.root(), Property::kVariables,
               "variable " + std::to_string(v.index) + " is not in the root scope");
      }
    }
  }
  return out;
}

const std::vector<VarIndex>& scope(const Network& network, NodeId id) { return network.scope(id); }

void check_evidence(const Network& net, const Evidence& e) {
  for (const auto& [var, value] : e) {
    if (var >= net.variable_count()) {
      throw std::invalid_argument("evidence names unknown variable " + std::to_string(var));
    }
    if (value >= net.variables()[var].cardinality) {
      throw std::invalid_argument("evidence value " + std::to_string(value) + " out of range for variable " +
                                  std::to_string(var));
    }
  }
}

LogProb evaluate(const Network& net, const Assignment& x) {
  net.require_acyclic();
  if (x.size() != net.variable_count()) {
    throw std::invalid_argument("assignment covers " + std::to_string(x.size()) + " of " +
                                std::to_string(net.variable_count()) + " variables");
  }
  std::vector<detail::VarState> state(x.size());
  for (VarIndex v = 0; v < x.size(); ++v) {
    if (x[v] >= net.variables()[v].cardinality) {
      throw std::invalid_argument("value " + std::to_string(x[v]) + " out of range for variable " +
                                  std::to_string(v));
    }
    state[v] = x[v];
  }
  std::vector<double> values;
  detail::upward(net, state, values);
  return LogProb::from_log(values[net.root()]);
}

LogProb evaluate_marginal(const Network& net, const Evidence& e) {
  net.require_acyclic();
  check_evidence(net, e);
  std::vector<detail::VarState> state(net.variable_count(), detail::kFree);
  for (const auto& [var, value] : e) state[var] = value;
  std::vector<double> values;
  detail::upward(net, state, values);
  return LogProb::from_log(values[net.root()]);
}

NetworkStats network_stats(const Network& net) {
  net.require_acyclic();
  NetworkStats stats;
  stats.nodes = net.size();
  for (const Node& n : net.nodes()) {
    stats.arcs += n.children.size();
    switch (n.kind) {
      case NodeKind::kSum:
        ++stats.sums;
        stats.sum_degrees.push_back(n.children.size());
        break;
      case NodeKind::kProduct: ++stats.products; break;
      case NodeKind::kLeaf: ++stats.leaves; break;
    }
  }
  std::vector<std::size_t> depth(net.size(), 0);
  for (NodeId id : net.topological_order()) {
    for (NodeId c : net.node(id).children) depth[id] = std::max(depth[id], depth[c] + 1);
  }
  stats.height = depth[net.root()];
  return stats;
}

}  // namespace spnmap
