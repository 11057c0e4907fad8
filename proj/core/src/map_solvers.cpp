#include "spnmap/map_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernels.hpp"

namespace spnmap {

const char* to_string(Solver solver) {
  switch (solver) {
    case Solver::kMaxProduct: return "maxprod";
    case Solver::kArgmaxProduct: return "amap";
    case Solver::kExact: return "exact";
  }
  return "?";
}

std::optional<Solver> parse_solver(std::string_view name) {
  if (name == "maxprod") return Solver::kMaxProduct;
  if (name == "amap") return Solver::kArgmaxProduct;
  if (name == "exact") return Solver::kExact;
  return std::nullopt;
}

namespace {

Assignment smallest_consistent(const Network& net, const Evidence& e) {
  Assignment x(net.variable_count());
  for (const auto& [var, value] : e) x[var] = value;
  return x;
}

// Maximizer of a leaf over the categories allowed by evidence.
Category leaf_argmax(const Network& net, NodeId id, const Evidence& e, LeafTies ties) {
  if (auto observed = e.find(net.node(id).variable)) return *observed;
  const auto log_dist = net.log_distribution(id);
  Category best = 0;
  for (Category k = 1; k < log_dist.size(); ++k) {
    if (log_dist[k] > log_dist[best] || (ties == LeafTies::kHighest && log_dist[k] == log_dist[best])) best = k;
  }
  return best;
}

// Zero-probability evidence: every consistent configuration scores 0.
std::optional<MapResult> zero_evidence_shortcut(const Network& net, const Evidence& e, Solver solver) {
  if (!evaluate_marginal(net, e).is_zero()) return std::nullopt;
  MapResult r{smallest_consistent(net, e), LogProb::zero(), solver, std::nullopt};
  if (solver == Solver::kMaxProduct) r.pd_value = LogProb::zero();
  return r;
}

// Upward pass of max-product. `choice` holds the chosen child of each sum node
// and the chosen category of each leaf.
struct MaxUpward {
  std::vector<double> pd;
  std::vector<std::uint32_t> choice;
};

MaxUpward max_upward(const Network& net, const Evidence& e, LeafTies ties) {
  MaxUpward up{std::vector<double>(net.size(), kLogZero), std::vector<std::uint32_t>(net.size(), 0)};
  for (NodeId id : net.topological_order()) {
    const Node& n = net.node(id);
    switch (n.kind) {
      case NodeKind::kLeaf: {
        const Category k = leaf_argmax(net, id, e, ties);
        up.choice[id] = k;
        up.pd[id] = detail::leaf_log_value(net, id, k);
        break;
      }
      case NodeKind::kProduct: {
        double acc = 0.0;
        for (NodeId c : n.children) acc += up.pd[c];
        up.pd[id] = acc;
        break;
      }
      case NodeKind::kSum: {
        const auto lw = net.log_weights(id);
        double best = kLogZero;
        std::uint32_t arg = 0;
        for (std::uint32_t j = 0; j < n.children.size(); ++j) {
          const double t = lw[j] + up.pd[n.children[j]];
          if (t > best) {
            best = t;
            arg = j;
          }
        }
        up.pd[id] = best;
        up.choice[id] = arg;
        break;
      }
    }
  }
  return up;
}

// Writes each child's configuration into the parent's scope-aligned slots.
void concatenate(const Network& net, NodeId id, const std::vector<std::vector<Category>>& per_node,
                 std::vector<Category>& out) {
  const auto& sc = net.scope(id);
  out.assign(sc.size(), 0);
  for (NodeId c : net.node(id).children) {
    const auto& child_scope = net.scope(c);
    for (std::size_t i = 0; i < child_scope.size(); ++i) {
      const auto pos = std::lower_bound(sc.begin(), sc.end(), child_scope[i]) - sc.begin();
      out[static_cast<std::size_t>(pos)] = per_node[c][i];
    }
  }
}

}  // namespace

MapResult max_product(const Network& net, const Evidence& e, const MapOptions& options) {
  net.require_acyclic();
  check_evidence(net, e);
  if (auto r = zero_evidence_shortcut(net, e, Solver::kMaxProduct)) return *r;

  const MaxUpward up = max_upward(net, e, options.leaf_ties);
  Assignment x = smallest_consistent(net, e);
  std::vector<char> seen(net.size(), 0);
  std::vector<NodeId> stack{net.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = 1;
    const Node& n = net.node(id);
    switch (n.kind) {
      case NodeKind::kLeaf: x[n.variable] = up.choice[id]; break;
      case NodeKind::kProduct: stack.insert(stack.end(), n.children.begin(), n.children.end()); break;
      case NodeKind::kSum: stack.push_back(n.children[up.choice[id]]); break;
    }
  }

  return MapResult{x, evaluate(net, x), Solver::kMaxProduct, LogProb::from_log(up.pd[net.root()])};
}

MapResult argmax_product(const Network& net, const Evidence& e, const MapOptions& options) {
  net.require_acyclic();
  check_evidence(net, e);
  if (auto r = zero_evidence_shortcut(net, e, Solver::kArgmaxProduct)) return *r;

  const bool score_max_product = options.candidates == AmapCandidates::kChildrenAndMaxProduct;
  MaxUpward up;
  if (score_max_product) up = max_upward(net, e, options.leaf_ties);

  // Both tables are aligned with scope(id): the argmax-product configuration
  // and the max-product configuration of every node.
  std::vector<std::vector<Category>> amap(net.size());
  std::vector<std::vector<Category>> pd(score_max_product ? net.size() : 0);
  std::vector<detail::VarState> state(net.variable_count(), detail::kFree);
  detail::SubnetEvaluator subnet(net);

  auto score = [&](NodeId id, const std::vector<Category>& x) {
    const auto& sc = net.scope(id);
    for (std::size_t i = 0; i < sc.size(); ++i) state[sc[i]] = x[i];
    return subnet.evaluate(id, state);
  };

  for (NodeId id : net.topological_order()) {
    const Node& n = net.node(id);
    switch (n.kind) {
      case NodeKind::kLeaf:
        amap[id].assign(1, leaf_argmax(net, id, e, options.leaf_ties));
        if (score_max_product) pd[id] = amap[id];
        break;
      case NodeKind::kProduct:
        concatenate(net, id, amap, amap[id]);
        if (score_max_product) concatenate(net, id, pd, pd[id]);
        break;
      case NodeKind::kSum: {
        double best = kLogZero;
        const std::vector<Category>* winner = &amap[n.children.front()];
        for (NodeId c : n.children) {
          const double value = score(id, amap[c]);
          if (value > best) {
            best = value;
            winner = &amap[c];
          }
        }
        if (score_max_product) {
          const NodeId chosen = n.children[up.choice[id]];
          pd[id] = pd[chosen];
          if (pd[id] != amap[chosen] && score(id, pd[id]) > best) winner = &pd[id];
        }
        amap[id] = *winner;
        break;
      }
    }
  }

  Assignment x = smallest_consistent(net, e);
  const auto& root_scope = net.scope(net.root());
  for (std::size_t i = 0; i < root_scope.size(); ++i) x[root_scope[i]] = amap[net.root()][i];
  return MapResult{x, evaluate(net, x), Solver::kArgmaxProduct, std::nullopt};
}

MapResult exact_map(const Network& net, const Evidence& e, std::uint64_t cap) {
  net.require_acyclic();
  check_evidence(net, e);

  std::vector<VarIndex> free_vars;
  std::uint64_t space = 1;
  for (const Variable& v : net.variables()) {
    if (e.contains(v.index)) continue;
    free_vars.push_back(v.index);
    if (v.cardinality == 0) continue;
    if (space > cap / v.cardinality) {
      throw CapExceeded("exact MAP needs more than " + std::to_string(cap) + " configurations");
    }
    space *= v.cardinality;
  }

  std::vector<detail::VarState> state(net.variable_count(), 0);
  for (const auto& [var, value] : e) state[var] = value;

  std::vector<double> values;
  double best = kLogZero;
  std::vector<detail::VarState> best_state = state;
  bool first = true;
  while (true) {
    detail::upward(net, state, values);
    const double v = values[net.root()];
    if (first || v > best) {
      best = v;
      best_state = state;
      first = false;
    }
    // Odometer: the highest free index varies fastest, giving lexicographic order.
    auto it = free_vars.rbegin();
    for (; it != free_vars.rend(); ++it) {
      const auto card = static_cast<detail::VarState>(net.variables()[*it].cardinality);
      if (++state[*it] < card) break;
      state[*it] = 0;
    }
    if (it == free_vars.rend()) break;
  }

  Assignment x(net.variable_count());
  for (VarIndex v = 0; v < x.size(); ++v) x[v] = static_cast<Category>(best_state[v]);
  return MapResult{x, LogProb::from_log(best), Solver::kExact, std::nullopt};
}

MapResult solve(const Network& net, const Evidence& e, Solver solver, std::uint64_t cap, const MapOptions& options) {
  switch (solver) {
    case Solver::kMaxProduct: return max_product(net, e, options);
    case Solver::kArgmaxProduct: return argmax_product(net, e, options);
    case Solver::kExact: return exact_map(net, e, cap);
  }
  throw std::invalid_argument("unknown solver");
}

bool decision_map(const Network& net, const Evidence& e, LogProb gamma, Solver solver, std::uint64_t cap) {
  if (gamma.is_zero()) return true;
  const MapResult r = solve(net, e, solver, cap);
  return r.value.log() >= gamma.log() + std::log1p(-1e-9);
}

ApproxFactorBound approx_factor_bound(const Network& net) {
  const NetworkStats stats = network_stats(net);
  ApproxFactorBound b;
  for (std::size_t d : stats.sum_degrees) b.log2_degree_product += std::log2(static_cast<double>(d));
  b.exponent_bound = kFactorExponent * static_cast<double>(stats.nodes + stats.arcs);
  b.has_sum_nodes = stats.sums > 0;
  b.within_bound = !b.has_sum_nodes || b.log2_degree_product < b.exponent_bound;
  return b;
}

}  // namespace spnmap
