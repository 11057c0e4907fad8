#include "spnmap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

namespace spnmap {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Non-empty lines with `comment` and everything after it removed.
std::vector<Line> tokenize(std::string_view text, char comment) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (const auto hash = raw.find(comment); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (auto tokens = split_tokens(raw); !tokens.empty()) lines.push_back({number, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (first != last && *first == '+') ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

template <typename T>
T expect_number(std::string_view token, std::size_t line, const char* what) {
  if (auto v = parse_number<T>(token)) return *v;
  throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(token) + "'");
}

void expect_arity(const Line& l, std::size_t lo, std::size_t hi, const char* directive) {
  if (l.tokens.size() < lo || l.tokens.size() > hi) {
    throw ParseError(l.number, std::string("malformed '") + directive + "' directive");
  }
}

}  // namespace

std::string format_double(double value, int digits) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

Network parse_spn(std::string_view text) {
  const auto lines = tokenize(text, '#');
  if (lines.empty() || lines.front().tokens.front() != "spn") {
    throw ParseError(lines.empty() ? 1 : lines.front().number, "document must start with 'spn <count>'");
  }
  const Line& header = lines.front();
  expect_arity(header, 2, 2, "spn");
  const auto count = expect_number<std::uint32_t>(header.tokens[1], header.number, "node count");
  if (count == 0) throw ParseError(header.number, "node count must be positive");

  std::vector<Node> nodes(count);
  std::vector<char> declared(count, 0);
  std::optional<NodeId> root;

  auto node_id = [&](std::string_view token, std::size_t line) {
    const auto id = expect_number<NodeId>(token, line, "node id");
    if (id >= count) throw ParseError(line, "node id " + std::to_string(id) + " exceeds declared count");
    return id;
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string_view directive = l.tokens[0];
    if (directive == "node") {
      if (l.tokens.size() < 3) throw ParseError(l.number, "malformed 'node' directive");
      const NodeId id = node_id(l.tokens[1], l.number);
      if (declared[id]) throw ParseError(l.number, "node " + std::to_string(id) + " declared twice");
      declared[id] = 1;
      const std::string_view kind = l.tokens[2];
      if (kind == "sum" || kind == "prod") {
        expect_arity(l, 3, 3, "node");
        nodes[id] = kind == "sum" ? Node::sum() : Node::product();
      } else if (kind == "leaf") {
        if (l.tokens.size() < 6) throw ParseError(l.number, "leaf needs a variable and at least two probabilities");
        const auto var = expect_number<VarIndex>(l.tokens[3], l.number, "variable index");
        std::vector<double> dist;
        for (std::size_t t = 4; t < l.tokens.size(); ++t) {
          dist.push_back(expect_number<double>(l.tokens[t], l.number, "probability"));
        }
        nodes[id] = Node::leaf(var, std::move(dist));
      } else {
        throw ParseError(l.number, "unknown node kind '" + std::string(kind) + "'");
      }
    } else if (directive == "edge") {
      expect_arity(l, 3, 4, "edge");
      const NodeId parent = node_id(l.tokens[1], l.number);
      const NodeId child = node_id(l.tokens[2], l.number);
      if (!declared[parent]) {
        throw ParseError(l.number, "edge from node " + std::to_string(parent) + " before its declaration");
      }
      Node& p = nodes[parent];
      const bool is_sum = p.kind == NodeKind::kSum;
      if (is_sum && l.tokens.size() != 4) throw ParseError(l.number, "edge under a sum node needs a weight");
      if (!is_sum && l.tokens.size() != 3) throw ParseError(l.number, "only edges under sum nodes carry weights");
      p.children.push_back(child);
      if (is_sum) p.weights.push_back(expect_number<double>(l.tokens[3], l.number, "weight"));
    } else if (directive == "root") {
      expect_arity(l, 2, 2, "root");
      if (root) throw ParseError(l.number, "root declared twice");
      root = node_id(l.tokens[1], l.number);
    } else if (directive == "spn") {
      throw ParseError(l.number, "repeated 'spn' header");
    } else {
      throw ParseError(l.number, "unknown directive '" + std::string(directive) + "'");
    }
  }

  for (NodeId id = 0; id < count; ++id) {
    if (!declared[id]) throw ParseError(0, "node " + std::to_string(id) + " is never declared");
  }
  return Network(std::move(nodes), root.value_or(0));
}

std::string serialize_spn(const Network& network) {
  std::ostringstream out;
  out << "spn " << network.size() << '\n';
  for (NodeId id = 0; id < network.size(); ++id) {
    const Node& n = network.node(id);
    out << "node " << id << ' ' << to_string(n.kind);
    if (n.kind == NodeKind::kLeaf) {
      out << ' ' << n.variable;
      for (double p : n.distribution) out << ' ' << format_double(p);
    }
    out << '\n';
  }
  for (NodeId id = 0; id < network.size(); ++id) {
    const Node& n = network.node(id);
    for (std::size_t j = 0; j < n.children.size(); ++j) {
      out << "edge " << id << ' ' << n.children[j];
      if (n.kind == NodeKind::kSum) out << ' ' << format_double(n.weights[j]);
      out << '\n';
    }
  }
  out << "root " << network.root() << '\n';
  return out.str();
}

CnfFormula parse_dimacs_cnf(std::string_view text) {
  CnfFormula formula;
  std::optional<std::size_t> declared_clauses;
  Clause pending;
  std::size_t last_line = 0;

  for (const Line& l : tokenize(text, '\0')) {
    last_line = l.number;
    if (l.tokens[0] == "c" || l.tokens[0].front() == 'c') continue;
    if (l.tokens[0] == "p") {
      if (declared_clauses) throw ParseError(l.number, "repeated problem line");
      if (l.tokens.size() != 4 || l.tokens[1] != "cnf") throw ParseError(l.number, "expected 'p cnf <vars> <clauses>'");
      formula.variable_count = expect_number<std::size_t>(l.tokens[2], l.number, "variable count");
      declared_clauses = expect_number<std::size_t>(l.tokens[3], l.number, "clause count");
      continue;
    }
    if (!declared_clauses) throw ParseError(l.number, "clause before the problem line");
    for (std::string_view token : l.tokens) {
      const auto lit = expect_number<Literal>(token, l.number, "literal");
      if (lit != 0) {
        if (static_cast<std::size_t>(std::abs(static_cast<long>(lit))) > formula.variable_count) {
          throw ParseError(l.number, "literal " + std::to_string(lit) + " exceeds the variable count");
        }
        pending.push_back(lit);
        continue;
      }
      if (formula.clauses.size() == *declared_clauses) throw ParseError(l.number, "more clauses than declared");
      if (pending.size() != 3) {
        throw ParseError(l.number, "clause has " + std::to_string(pending.size()) + " literals, expected 3");
      }
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
          if (std::abs(pending[a]) == std::abs(pending[b])) {
            throw ParseError(l.number, "clause repeats variable " + std::to_string(std::abs(pending[a])));
          }
        }
      }
      formula.clauses.push_back(std::move(pending));
      pending.clear();
    }
  }
  if (!declared_clauses) throw ParseError(0, "missing 'p cnf' problem line");
  if (!pending.empty()) throw ParseError(last_line, "unterminated clause");
  if (formula.clauses.size() != *declared_clauses) {
    throw ParseError(0, "declared " + std::to_string(*declared_clauses) + " clauses, found " +
                            std::to_string(formula.clauses.size()));
  }
  return formula;
}

std::string serialize_dimacs_cnf(const CnfFormula& formula) {
  std::ostringstream out;
  out << "p cnf " << formula.variable_count << ' ' << formula.clauses.size() << '\n';
  for (const Clause& c : formula.clauses) {
    for (Literal lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

Graph parse_graph(std::string_view text, std::vector<std::string>* warnings) {
  const auto lines = tokenize(text, '#');
  if (lines.empty() || lines.front().tokens.front() != "graph") {
    throw ParseError(lines.empty() ? 1 : lines.front().number, "document must start with 'graph <n>'");
  }
  expect_arity(lines.front(), 2, 2, "graph");
  const auto n = expect_number<std::size_t>(lines.front().tokens[1], lines.front().number, "vertex count");
  Graph g(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0] != "edge") throw ParseError(l.number, "unknown directive '" + std::string(l.tokens[0]) + "'");
    expect_arity(l, 3, 3, "edge");
    const auto u = expect_number<std::size_t>(l.tokens[1], l.number, "vertex");
    const auto v = expect_number<std::size_t>(l.tokens[2], l.number, "vertex");
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(l.number, "vertex out of range 1.." + std::to_string(n));
    if (u == v) throw ParseError(l.number, "self-loop on vertex " + std::to_string(u));
    if (!g.add_edge(u - 1, v - 1) && warnings) {
      warnings->push_back("line " + std::to_string(l.number) + ": duplicate edge " + std::to_string(u) + " " +
                          std::to_string(v) + " ignored");
    }
  }
  return g;
}

std::string serialize_graph(const Graph& graph) {
  std::ostringstream out;
  out << "graph " << graph.vertex_count() << '\n';
  for (const auto& [u, v] : graph.edges()) out << "edge " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

Evidence parse_evidence(std::string_view text) {
  Evidence e;
  if (split_tokens(text).empty()) return e;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const auto tokens = split_tokens(text.substr(pos, comma - pos));
    if (tokens.size() != 1) throw ParseError(1, "expected 'index=value' pairs separated by commas");
    const std::string_view pair = tokens[0];
    const auto eq = pair.find('=');
    if (eq == std::string_view::npos) throw ParseError(1, "missing '=' in '" + std::string(pair) + "'");
    const auto var = expect_number<VarIndex>(pair.substr(0, eq), 1, "variable index");
    const auto value = expect_number<Category>(pair.substr(eq + 1), 1, "category");
    if (!e.set(var, value)) throw ParseError(1, "variable " + std::to_string(var) + " given twice");
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return e;
}

std::string format_evidence(const Evidence& evidence) {
  std::string out;
  for (const auto& [var, value] : evidence) {
    if (!out.empty()) out += ',';
    out += std::to_string(var) + "=" + std::to_string(value);
  }
  return out;
}

std::string format_assignment(const Assignment& x) {
  std::string out;
  for (VarIndex v = 0; v < x.size(); ++v) {
    if (v) out += ' ';
    out += std::to_string(v) + "=" + std::to_string(x[v]);
  }
  return out;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "vertices,edge_pct,nodes,mean_ratio,stddev_ratio\n";
  for (const ExperimentRow& r : rows) {
    out << r.vertices << ',' << format_double(r.edge_pct) << ',' << r.nodes << ',' << format_double(r.mean_ratio)
        << ',' << format_double(r.stddev_ratio) << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace spnmap
