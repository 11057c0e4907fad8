#include "spnmap/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spnmap {

bool Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u + 1));
  if (has_edge(u, v)) return false;
  adjacent_[u * n_ + v] = adjacent_[v * n_ + u] = 1;
  const std::pair<std::size_t, std::size_t> e{std::min(u, v), std::max(u, v)};
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
  return true;
}

std::size_t Graph::degree(std::size_t v) const {
  return static_cast<std::size_t>(
      std::count(adjacent_.begin() + static_cast<std::ptrdiff_t>(v * n_),
                 adjacent_.begin() + static_cast<std::ptrdiff_t>((v + 1) * n_), 1));
}

void CnfFormula::check() const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const Clause& c = clauses[i];
    const std::string where = "clause " + std::to_string(i + 1);
    if (c.size() != 3) {
      throw std::invalid_argument(where + " has " + std::to_string(c.size()) + " literals, expected 3");
    }
    std::vector<std::size_t> vars;
    for (Literal lit : c) {
      const auto var = static_cast<std::size_t>(std::abs(static_cast<long>(lit)));
      if (lit == 0 || var > variable_count) {
        throw std::invalid_argument(where + " has out-of-range literal " + std::to_string(lit));
      }
      vars.push_back(var);
    }
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
      throw std::invalid_argument(where + " repeats a variable");
    }
  }
}

bool CnfFormula::satisfied_by(const std::vector<bool>& truth) const {
  return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](Literal lit) {
      const bool value = truth[static_cast<std::size_t>(std::abs(lit)) - 1];
      return lit > 0 ? value : !value;
    });
  });
}

namespace {

// 2^exponent / c rounded to double, keeping at least 64 significant bits
// through the integer division.
double power_of_two_over(std::size_t exponent, const BigInt& c) {
  const std::size_t shift = 64 + msb(c);
  const BigInt scaled = (BigInt(1) << (exponent + shift)) / c;
  return std::ldexp(scaled.convert_to<double>(), -static_cast<int>(shift));
}

const std::vector<double> kCertainOne{0.0, 1.0};
const std::vector<double> kCertainZero{1.0, 0.0};
const std::vector<double> kUniform{0.5, 0.5};

}  // namespace

ReductionResult mis_to_spn(const Graph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n == 0) throw std::invalid_argument("graph has no vertices");

  std::vector<std::size_t> exponent(n);
  BigInt c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    exponent[i] = n - graph.degree(i) - 1;
    c += BigInt(1) << exponent[i];
  }

  std::vector<Node> nodes;
  nodes.reserve(n * n + n + 1);
  nodes.push_back(Node::sum());
  for (std::size_t i = 0; i < n; ++i) {
    const auto product_id = static_cast<NodeId>(nodes.size());
    nodes[0].children.push_back(product_id);
    nodes[0].weights.push_back(power_of_two_over(exponent[i], c));
    nodes.push_back(Node::product());
    for (std::size_t j = 0; j < n; ++j) {
      nodes[product_id].children.push_back(static_cast<NodeId>(nodes.size()));
      const auto& dist = j == i ? kCertainOne : graph.has_edge(i, j) ? kCertainZero : kUniform;
      nodes.push_back(Node::leaf(static_cast<VarIndex>(j), dist));
    }
  }

  return ReductionResult{Network(std::move(nodes), 0), c, std::nullopt, 1, n, n};
}

LogProb mis_decision_threshold(const ReductionResult& result, std::size_t v) {
  if (!result.normalizer) throw std::invalid_argument("result does not carry an independent-set normalizer");
  if (v == 0) return LogProb::zero();
  // log(v) - log(c), with c possibly far beyond double range.
  const BigInt& c = *result.normalizer;
  const std::size_t bits = msb(c);
  const std::size_t drop = bits > 60 ? bits - 60 : 0;
  const double log_c = std::log((c >> drop).convert_to<double>()) + static_cast<double>(drop) * std::numbers::ln2;
  return LogProb::from_log(std::log(static_cast<double>(v)) - log_c);
}

ReductionResult cnf_to_spn(const CnfFormula& formula) {
  formula.check();
  const std::size_t n = formula.variable_count;
  const std::size_t m = formula.clauses.size();
  if (m == 0) throw std::invalid_argument("formula has no clauses");

  const double weight = 1.0 / static_cast<double>(7 * m);
  std::vector<Node> nodes;
  nodes.reserve(1 + 7 * m * (n + 1));
  nodes.push_back(Node::sum());
  for (const Clause& clause : formula.clauses) {
    for (unsigned bits = 0; bits < 8; ++bits) {
      // Local assignment: literal k's variable takes bit k.
      std::vector<int> local(n + 1, -1);
      bool satisfied = false;
      for (unsigned k = 0; k < 3; ++k) {
        const int value = static_cast<int>((bits >> k) & 1U);
        const Literal lit = clause[k];
        local[static_cast<std::size_t>(std::abs(lit))] = value;
        satisfied = satisfied || (lit > 0 ? value == 1 : value == 0);
      }
      if (!satisfied) continue;

      const auto product_id = static_cast<NodeId>(nodes.size());
      nodes[0].children.push_back(product_id);
      nodes[0].weights.push_back(weight);
      nodes.push_back(Node::product());
      for (std::size_t var = 1; var <= n; ++var) {
        nodes[product_id].children.push_back(static_cast<NodeId>(nodes.size()));
        const auto& dist = local[var] < 0 ? kUniform : local[var] == 1 ? kCertainOne : kCertainZero;
        nodes.push_back(Node::leaf(static_cast<VarIndex>(var - 1), dist));
      }
    }
  }

  const auto threshold =
      LogProb::from_log((3.0 - static_cast<double>(n)) * std::numbers::ln2 - std::log(7.0));
  return ReductionResult{Network(std::move(nodes), 0), std::nullopt, threshold, 1, m, n};
}

std::uint64_t amplification_q(std::size_t clauses, std::size_t single_copy_size, double epsilon) {
  if (clauses < 1) throw std::invalid_argument("amplification needs at least one clause");
  if (single_copy_size < 1) throw std::invalid_argument("single-copy size must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1)");

  const double base = std::numbers::ln2 * static_cast<double>(clauses) *
                      std::pow(static_cast<double>(single_copy_size) + 2.0, epsilon);
  const double value = std::pow(base, 1.0 / (1.0 - epsilon));
  if (!std::isfinite(value) || value >= 0x1p62) {
    throw std::invalid_argument("amplification factor does not fit in 63 bits");
  }
  return 1 + static_cast<std::uint64_t>(std::floor(value));
}

ReductionResult amplify(const ReductionResult& base, std::size_t q) {
  if (q < 1) throw std::invalid_argument("number of copies must be at least 1");
  if (q == 1) return base;

  const Network& net = base.network;
  const std::size_t block = net.size();
  const std::size_t n = net.variable_count();
  std::vector<Node> nodes;
  nodes.reserve(q * block + 1);
  nodes.push_back(Node::product());
  for (std::size_t t = 0; t < q; ++t) {
    const auto offset = static_cast<NodeId>(1 + t * block);
    nodes[0].children.push_back(offset + net.root());
    for (const Node& src : net.nodes()) {
      Node copy = src;
      for (NodeId& c : copy.children) c += offset;
      if (copy.kind == NodeKind::kLeaf) copy.variable = static_cast<VarIndex>(t * n + src.variable);
      nodes.push_back(std::move(copy));
    }
  }

  ReductionResult out{Network(std::move(nodes), 0), std::nullopt, std::nullopt, base.copies * q,
                      base.base_size, base.base_variables};
  if (base.normalizer) out.normalizer = boost::multiprecision::pow(*base.normalizer, static_cast<unsigned>(q));
  if (base.threshold) out.threshold = base.threshold->pow(static_cast<double>(q));
  return out;
}

ReductionResult gap_fragment() {
  std::vector<Node> nodes;
  nodes.push_back(Node::sum());
  nodes[0].children = {1, 2, 3, 4};
  nodes[0].weights = {5.0 / 16.0, 11.0 / 48.0, 11.0 / 48.0, 11.0 / 48.0};
  nodes.push_back(Node::leaf(0, kCertainOne));
  for (int i = 0; i < 3; ++i) nodes.push_back(Node::leaf(0, kCertainZero));
  return ReductionResult{Network(std::move(nodes), 0), std::nullopt, std::nullopt, 1, 1, 1};
}

}  // namespace spnmap
