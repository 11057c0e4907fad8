#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spnmap/log_prob.hpp"

namespace spnmap {

using NodeId = std::uint32_t;
using VarIndex = std::uint32_t;
using Category = std::uint32_t;

/// Tolerance for a sum node's weights to count as normalized. Weights within
/// this distance of 1 are rescaled on construction.
inline constexpr double kWeightTolerance = 1e-6;
/// Tolerance for a leaf distribution to count as normalized.
inline constexpr double kLeafTolerance = 1e-9;

enum class NodeKind { kSum, kProduct, kLeaf };

const char* to_string(NodeKind kind);

struct Variable {
  VarIndex index = 0;
  /// Number of categories; 0 marks an index that no leaf mentions.
  std::uint32_t cardinality = 0;
};

/// One node of a network. Which fields are meaningful depends on `kind`:
/// sums use `children` and the parallel `weights`, products use `children`,
/// leaves use `variable` and `distribution`.
struct Node {
  NodeKind kind = NodeKind::kLeaf;
  std::vector<NodeId> children;
  std::vector<double> weights;
  VarIndex variable = 0;
  std::vector<double> distribution;

  static Node sum() { return Node{NodeKind::kSum, {}, {}, 0, {}}; }
  static Node product() { return Node{NodeKind::kProduct, {}, {}, 0, {}}; }
  static Node leaf(VarIndex var, std::vector<double> dist) {
    return Node{NodeKind::kLeaf, {}, {}, var, std::move(dist)};
  }
};

/// Total configuration: one category per network variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Category> values) : values_(std::move(values)) {}
  explicit Assignment(std::size_t n, Category fill = 0) : values_(n, fill) {}

  std::size_t size() const { return values_.size(); }
  Category operator[](VarIndex v) const { return values_[v]; }
  Category& operator[](VarIndex v) { return values_[v]; }
  std::span<const Category> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Category> values_;
};

/// Partial configuration. Iteration is ordered by variable index.
class Evidence {
 public:
  using Map = std::map<VarIndex, Category>;

  Evidence() = default;
  explicit Evidence(Map values) : values_(std::move(values)) {}

  /// Returns false (and leaves the evidence untouched) if `var` is already set.
  bool set(VarIndex var, Category value) { return values_.emplace(var, value).second; }
  std::optional<Category> find(VarIndex var) const;
  bool contains(VarIndex var) const { return values_.contains(var); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }

  /// True iff `x` agrees with every observed variable.
  bool consistent(const Assignment& x) const;

  friend bool operator==(const Evidence&, const Evidence&) = default;

 private:
  Map values_;
};

/// Immutable rooted DAG of sum, product and leaf nodes.
///
/// Construction never rejects a structurally odd network (cycles, gaps in the
/// variable indices, unnormalized weights); those are reported by validate().
/// It does reject child references that point outside the node store. Query
/// operations require an acyclic network and throw std::logic_error otherwise.
class Network {
 public:
  Network(std::vector<Node> nodes, NodeId root);

  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return root_; }
  const Node& node(NodeId id) const;
  std::span<const Node> nodes() const { return nodes_; }

  std::span<const Variable> variables() const { return variables_; }
  std::size_t variable_count() const { return variables_.size(); }

  bool is_acyclic() const { return acyclic_; }

  /// Nodes reachable from the root, children before parents.
  std::span<const NodeId> topological_order() const { return reachable_order_; }
  bool is_reachable(NodeId id) const { return reachable_[id] != 0; }

  /// Sorted variable indices under `id`. Throws std::out_of_range.
  const std::vector<VarIndex>& scope(NodeId id) const;

  /// log of each sum weight, parallel to `node(id).weights`.
  std::span<const double> log_weights(NodeId id) const { return log_params_[id]; }
  /// log of each leaf probability, parallel to `node(id).distribution`.
  std::span<const double> log_distribution(NodeId id) const { return log_params_[id]; }

  /// Variables whose leaves disagree about the number of categories.
  std::span<const VarIndex> inconsistent_cardinalities() const { return bad_cardinality_; }

  void require_acyclic() const;

  /// A node on a directed cycle, if the network has one.
  std::optional<NodeId> cycle_node() const { return cycle_node_; }

 private:
  std::vector<Node> nodes_;
  NodeId root_;
  std::vector<Variable> variables_;
  std::vector<VarIndex> bad_cardinality_;
  bool acyclic_ = true;
  std::vector<NodeId> reachable_order_;
  std::vector<char> reachable_;
  std::vector<std::vector<VarIndex>> scopes_;
  std::vector<std::vector<double>> log_params_;
  std::optional<NodeId> cycle_node_;
};

enum class Property {
  kRoot,
  kAcyclic,
  kReachable,
  kArity,
  kComplete,
  kDecomposable,
  kNormalized,
  kLeafDistribution,
  kVariables,
};

const char* to_string(Property property);

struct Violation {
  NodeId node = 0;
  Property property = Property::kAcyclic;
  std::string message;
};

/// Structural check. An empty result means the network is acyclic, complete,
/// decomposable and normalized, and every node and variable is reachable.
std::vector<Violation> validate(const Network& network);

/// Sorted variable indices in the scope of `id`.
const std::vector<VarIndex>& scope(const Network& network, NodeId id);

/// Value of the network at a total configuration.
/// Throws std::invalid_argument if `x` does not cover every variable or holds
/// an out-of-range category.
LogProb evaluate(const Network& network, const Assignment& x);

/// Sum of evaluate() over every total configuration consistent with `e`, in
/// one upward pass. Unobserved leaves contribute 1.
LogProb evaluate_marginal(const Network& network, const Evidence& e);

struct NetworkStats {
  std::size_t nodes = 0;
  std::size_t sums = 0;
  std::size_t products = 0;
  std::size_t leaves = 0;
  std::size_t arcs = 0;
  std::size_t height = 0;
  /// Out-degree of each sum node, ordered by node id.
  std::vector<std::size_t> sum_degrees;
};

NetworkStats network_stats(const Network& network);

/// Throws std::invalid_argument if any evidence variable or category is out of range.
void check_evidence(const Network& network, const Evidence& e);

}  // namespace spnmap
