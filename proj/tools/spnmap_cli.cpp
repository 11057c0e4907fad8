// spnmap: command-line front end for the SPN MAP engine.
//
// Exit codes: 0 success, 1 validation or solve failure, 2 usage or parse error.

#include <cstdint>
#include <fstream>
#include <map>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spnmap/experiments.hpp"
#include "spnmap/io.hpp"
#include "spnmap/map_solvers.hpp"
#include "spnmap/network.hpp"
#include "spnmap/reductions.hpp"

namespace {

using namespace spnmap;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Thrown for bad arguments that CLI11 cannot catch on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_value(std::ostream& out, LogProb p) {
  out << "value " << format_double(p.linear(), 15) << " logvalue " << format_double(p.log(), 15) << '\n';
}

// Loads a network and refuses to go on if it is structurally invalid.
std::optional<Network> load_valid(const std::string& path) {
  Network net = parse_spn(read_file(path));
  const auto violations = validate(net);
  if (violations.empty()) return net;
  for (const Violation& v : violations) {
    std::cerr << "invalid: node " << v.node << " [" << to_string(v.property) << "] " << v.message << '\n';
  }
  return std::nullopt;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

int cmd_validate(const std::string& path) {
  const Network net = parse_spn(read_file(path));
  const auto violations = validate(net);
  for (const Violation& v : violations) {
    std::cout << "node " << v.node << " [" << to_string(v.property) << "] " << v.message << '\n';
  }
  if (violations.empty()) std::cout << "valid\n";
  return violations.empty() ? kOk : kFailure;
}

int cmd_stats(const std::string& path) {
  const auto net = load_valid(path);
  if (!net) return kFailure;
  const NetworkStats s = network_stats(*net);
  const ApproxFactorBound b = approx_factor_bound(*net);
  std::cout << "nodes " << s.nodes << "\nsums " << s.sums << "\nproducts " << s.products << "\nleaves "
            << s.leaves << "\narcs " << s.arcs << "\nheight " << s.height << "\nvariables "
            << net->variable_count() << "\nsum_degrees";
  for (std::size_t d : s.sum_degrees) std::cout << ' ' << d;
  std::cout << "\nlog2_degree_product " << format_double(b.log2_degree_product) << "\nexponent_bound "
            << format_double(b.exponent_bound) << "\nwithin_bound " << (b.within_bound ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_eval(const std::string& path, const std::string& assignment_text) {
  const auto net = load_valid(path);
  if (!net) return kFailure;
  const Evidence e = parse_evidence(assignment_text);
  Assignment x(net->variable_count());
  for (VarIndex v = 0; v < x.size(); ++v) {
    const auto value = e.find(v);
    if (!value) throw UsageError("assignment leaves variable " + std::to_string(v) + " unset");
    x[v] = *value;
  }
  if (e.size() != x.size()) throw UsageError("assignment names variables the network does not have");
  print_value(std::cout, evaluate(*net, x));
  return kOk;
}

int cmd_marginal(const std::string& path, const std::string& evidence_text) {
  const auto net = load_valid(path);
  if (!net) return kFailure;
  const Evidence e = parse_evidence(evidence_text);
  check_evidence(*net, e);
  print_value(std::cout, evaluate_marginal(*net, e));
  return kOk;
}

int cmd_map(const std::string& path, const std::string& algo, const std::string& evidence_text,
            std::uint64_t cap, const MapOptions& options) {
  const auto solver = parse_solver(algo);
  if (!solver) throw UsageError("unknown algorithm '" + algo + "'");
  const auto net = load_valid(path);
  if (!net) return kFailure;
  const Evidence e = parse_evidence(evidence_text);
  check_evidence(*net, e);
  const MapResult r = solve(*net, e, *solver, cap, options);
  print_value(std::cout, r.value);
  std::cout << "config " << format_assignment(r.configuration) << '\n';
  return kOk;
}

int cmd_reduce_mis(const std::string& path, const std::string& out_path) {
  std::vector<std::string> warnings;
  const Graph g = parse_graph(read_file(path), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  const ReductionResult r = mis_to_spn(g);
  std::string text = "# independent-set network: vertices " + std::to_string(g.vertex_count()) + " edges " +
                     std::to_string(g.edges().size()) + " normalizer " + r.normalizer->str() + '\n';
  write_output(out_path, text + serialize_spn(r.network));
  return kOk;
}

int cmd_reduce_cnf(const std::string& path, std::optional<double> epsilon, std::optional<std::size_t> copies,
                   const std::string& out_path) {
  const CnfFormula f = parse_dimacs_cnf(read_file(path));
  ReductionResult r = cnf_to_spn(f);
  std::size_t q = copies.value_or(1);
  if (epsilon) {
    const NetworkStats s = network_stats(r.network);
    q = amplification_q(f.clauses.size(), s.nodes + s.arcs, *epsilon);
  }
  r = amplify(r, q);
  std::string text = "# cnf network: variables " + std::to_string(f.variable_count) + " clauses " +
                     std::to_string(f.clauses.size()) + " copies " + std::to_string(q) + '\n';
  text += "# threshold " + format_double(r.threshold->linear()) + " logthreshold " +
          format_double(r.threshold->log()) + '\n';
  write_output(out_path, text + serialize_spn(r.network));
  return kOk;
}

int cmd_experiment(const ExperimentConfig& config, const std::string& csv_path) {
  const auto rows = run_mis_experiment(config);
  write_output(csv_path, experiment_csv(rows));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-product network evaluation, MAP inference and hardness reductions"};
  app.require_subcommand(1);

  std::string file;
  std::string text_arg;
  std::string algo = "amap";
  std::string out_path;
  std::uint64_t cap = kDefaultExactCap;
  std::optional<double> epsilon;
  std::optional<std::size_t> copies;
  ExperimentConfig config;
  std::string csv_path;
  const std::map<std::string, LeafTies> tie_names{{"lowest", LeafTies::kLowest}, {"highest", LeafTies::kHighest}};
  MapOptions map_options;

  auto* validate_cmd = app.add_subcommand("validate", "Check structural properties of an SPN file");
  validate_cmd->add_option("file", file, "SPN file")->required();

  auto* stats_cmd = app.add_subcommand("stats", "Print node counts, height and approximation bounds");
  stats_cmd->add_option("file", file, "SPN file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the network at a total assignment");
  eval_cmd->add_option("file", file, "SPN file")->required();
  eval_cmd->add_option("--assignment,-a", text_arg, "Comma-separated index=value pairs")->required();

  auto* marginal_cmd = app.add_subcommand("marginal", "Marginal probability of evidence");
  marginal_cmd->add_option("file", file, "SPN file")->required();
  marginal_cmd->add_option("--evidence,-e", text_arg, "Comma-separated index=value pairs");

  auto* map_cmd = app.add_subcommand("map", "Most probable configuration consistent with evidence");
  map_cmd->add_option("file", file, "SPN file")->required();
  map_cmd->add_option("--algo", algo, "maxprod, amap or exact")
      ->check(CLI::IsMember({"maxprod", "amap", "exact"}));
  map_cmd->add_option("--evidence,-e", text_arg, "Comma-separated index=value pairs");
  map_cmd->add_option("--cap", cap, "Configuration limit for the exact solver");
  map_cmd->add_option("--leaf-ties", map_options.leaf_ties, "Category picked by tied leaves: lowest or highest")
      ->transform(CLI::CheckedTransformer(tie_names));

  auto* reduce_cmd = app.add_subcommand("reduce", "Compile a combinatorial instance into an SPN");
  reduce_cmd->require_subcommand(1);
  auto* mis_cmd = reduce_cmd->add_subcommand("mis", "Independent-set graph to SPN");
  mis_cmd->add_option("graph", file, "Graph file")->required();
  mis_cmd->add_option("--output,-o", out_path, "Output path (default stdout)");
  auto* cnf_cmd = reduce_cmd->add_subcommand("cnf", "3-CNF DIMACS formula to SPN");
  cnf_cmd->add_option("dimacs", file, "DIMACS file")->required();
  auto* eps_opt = cnf_cmd->add_option("--epsilon", epsilon, "Amplify with q computed from epsilon in [0,1)");
  cnf_cmd->add_option("--copies", copies, "Amplify with an explicit number of copies")
      ->check(CLI::PositiveNumber)
      ->excludes(eps_opt);
  cnf_cmd->add_option("--output,-o", out_path, "Output path (default stdout)");

  auto* experiment_cmd = app.add_subcommand("experiment", "Ratio study of argmax-product over max-product");
  experiment_cmd->require_subcommand(1);
  auto* exp_mis = experiment_cmd->add_subcommand("mis", "Random independent-set networks");
  exp_mis->add_option("--vertices", config.vertex_counts, "Vertex counts")->delimiter(',')->required();
  exp_mis->add_option("--edge-pct", config.edge_percentages, "Edge percentages in (0,100]")
      ->delimiter(',')
      ->required();
  exp_mis->add_option("--reps", config.repetitions, "Repetitions per cell");
  exp_mis->add_option("--seed", config.seed, "Base seed");
  exp_mis->add_option("--csv", csv_path, "CSV output path (default stdout)");
  exp_mis->add_option("--leaf-ties", config.leaf_ties, "Category picked by tied leaves (default highest)")
      ->transform(CLI::CheckedTransformer(tie_names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*stats_cmd) return cmd_stats(file);
    if (*eval_cmd) return cmd_eval(file, text_arg);
    if (*marginal_cmd) return cmd_marginal(file, text_arg);
    if (*map_cmd) return cmd_map(file, algo, text_arg, cap, map_options);
    if (*mis_cmd) return cmd_reduce_mis(file, out_path);
    if (*cnf_cmd) return cmd_reduce_cnf(file, epsilon, copies, out_path);
    if (*exp_mis) return cmd_experiment(config, csv_path);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
