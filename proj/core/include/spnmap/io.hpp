#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spnmap/experiments.hpp"
#include "spnmap/network.hpp"
#include "spnmap/reductions.hpp"

namespace spnmap {

/// Syntax error in one of the text formats. `line()` is 1-based; 0 means the
/// error concerns the document as a whole.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// SPN text format, one directive per line, `#` starts a comment:
//
//   spn <node count>
//   node <id> sum | node <id> prod | node <id> leaf <var> <p0> <p1> ...
//   edge <parent> <child> [weight]      weight present iff parent is a sum
//   root <id>                           optional, defaults to 0
//
// Nodes must be declared before edges mention them as parents.

/// Only syntax is checked here; structural problems surface in validate().
Network parse_spn(std::string_view text);
/// Nodes in id order, then edges grouped by parent, then the root. Decimals
/// carry 17 significant digits.
std::string serialize_spn(const Network& network);

/// DIMACS CNF restricted to clauses over exactly 3 distinct variables.
CnfFormula parse_dimacs_cnf(std::string_view text);
std::string serialize_dimacs_cnf(const CnfFormula& formula);

/// `graph <n>` followed by `edge <u> <v>` lines, 1-based vertices. Duplicate
/// edges are dropped with a message appended to `warnings` when non-null.
Graph parse_graph(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string serialize_graph(const Graph& graph);

/// Comma-separated `index=value` pairs with 0-based variables; "" is empty.
Evidence parse_evidence(std::string_view text);
std::string format_evidence(const Evidence& evidence);
/// `i=v` pairs separated by spaces, in variable order.
std::string format_assignment(const Assignment& x);

/// Locale independent; 17 significant digits round-trip every double.
std::string format_double(double value, int digits = 17);

/// Header `vertices,edge_pct,nodes,mean_ratio,stddev_ratio` plus one line per row.
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

std::string read_file(const std::string& path);

}  // namespace spnmap
