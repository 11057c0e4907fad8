#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spnmap/log_prob.hpp"
#include "spnmap/network.hpp"

namespace spnmap {

using BigInt = boost::multiprecision::cpp_int;

/// Undirected simple graph on vertices 0..n-1.
class Graph {
 public:
  explicit Graph(std::size_t n) : n_(n), adjacent_(n * n, 0) {}

  std::size_t vertex_count() const { return n_; }
  /// Returns false if the edge was already present. Throws std::invalid_argument
  /// on a self-loop or an endpoint out of range.
  bool add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const { return adjacent_[u * n_ + v] != 0; }
  std::size_t degree(std::size_t v) const;
  /// Edges as (u, v) with u < v, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<char> adjacent_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// A literal is a signed 1-based variable index: 3 means X3, -3 means not X3.
using Literal = std::int32_t;
using Clause = std::vector<Literal>;

/// Conjunction of clauses over exactly 3 distinct variables each.
struct CnfFormula {
  std::size_t variable_count = 0;
  std::vector<Clause> clauses;

  /// Throws std::invalid_argument on arity != 3, repeated variables or
  /// out-of-range literals.
  void check() const;
  bool satisfied_by(const std::vector<bool>& truth) const;
};

struct ReductionResult {
  Network network;
  /// Normalizer c of the independent-set construction (c^q after amplification).
  std::optional<BigInt> normalizer;
  /// Satisfiability threshold of the CNF construction (threshold^q after amplification).
  std::optional<LogProb> threshold;
  std::size_t copies = 1;
  /// Clause count (CNF) or vertex count (MIS) of the base instance.
  std::size_t base_size = 0;
  /// Variables per copy.
  std::size_t base_variables = 0;
};

/// Height-2 tree encoding maximum independent set: one product per vertex
/// over n binary leaves under a root sum with weights 2^(n-n_i-1)/c.
/// Node 0 is the root; vertex i owns node 1+i(n+1) and its n leaves follow.
ReductionResult mis_to_spn(const Graph& graph);

/// v/c: the MAP value reached iff the graph has an independent set of size v.
LogProb mis_decision_threshold(const ReductionResult& result, std::size_t v);

/// Height-2 tree encoding 3-SAT: seven products per clause, one for each
/// satisfying assignment of the clause's variables, under a uniform root sum.
/// The formula is satisfiable iff the MAP value reaches 2^(3-n)/7.
ReductionResult cnf_to_spn(const CnfFormula& formula);

/// 1 + floor((ln2 * m * (s'+2)^eps)^(1/(1-eps))).
/// Throws std::invalid_argument on m < 1, s' < 1, eps outside [0,1), or a
/// result that does not fit in 63 bits.
std::uint64_t amplification_q(std::size_t clauses, std::size_t single_copy_size, double epsilon);

/// Product of q variable-disjoint copies; copy t renames variable k to t*n+k.
/// q = 1 returns the input unchanged. Throws std::invalid_argument on q < 1.
ReductionResult amplify(const ReductionResult& base, std::size_t q);

/// The one-variable sum node separating argmax-product from max-product:
/// weight 5/16 on a leaf certain of X=1, weight 11/48 on each of three leaves
/// certain of X=0.
ReductionResult gap_fragment();

}  // namespace spnmap
