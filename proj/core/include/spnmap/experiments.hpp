#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spnmap/map_solvers.hpp"
#include "spnmap/network.hpp"
#include "spnmap/reductions.hpp"

namespace spnmap {

/// Graph on n vertices with round-half-up(pct/100 * n(n-1)/2) edges (at least
/// one), drawn uniformly without replacement. Deterministic given `seed`.
/// Throws std::invalid_argument unless n >= 2 and 0 < pct <= 100.
Graph random_graph(std::size_t n, double edge_pct, std::uint64_t seed);

/// Number of edges random_graph() draws.
std::size_t edge_count_for(std::size_t n, double edge_pct);

/// value(argmax_product) / value(max_product). 1 when both are zero, +inf
/// when only the denominator is.
double ratio(const Network& network, const Evidence& evidence = {}, const MapOptions& options = {});

/// Random complete, decomposable, normalized SPN over binary variables with
/// height at most max(max_height, 1 if variables > 1). Sum nodes mix
/// scope-preserving children, product nodes split the scope into random
/// blocks; sub-networks are occasionally shared, so the result may be a DAG.
/// Deterministic given `seed`.
Network random_spn(std::size_t variables, std::size_t max_height, std::size_t max_fanout,
                   std::uint64_t seed);

struct ExperimentConfig {
  std::vector<std::size_t> vertex_counts;
  std::vector<double> edge_percentages;
  std::size_t repetitions = 100;
  std::uint64_t seed = 1;
  /// Uniform leaves dominate these networks; with lowest-category ties every
  /// candidate is a single vertex and the ratio is always 1.
  LeafTies leaf_ties = LeafTies::kHighest;
};

struct ExperimentRow {
  std::size_t vertices = 0;
  double edge_pct = 0.0;
  std::size_t nodes = 0;
  double mean_ratio = 0.0;
  /// Sample standard deviation (n-1 denominator); 0 for a single repetition.
  double stddev_ratio = 0.0;
  double mean_ms_max_product = 0.0;
  double mean_ms_argmax_product = 0.0;
  /// Per-repetition ratios in repetition order.
  std::vector<double> ratios;
};

/// 64-bit mix of the cell coordinates and repetition index.
std::uint64_t repetition_seed(std::uint64_t base, std::size_t vertices, double edge_pct,
                              std::size_t repetition);

/// Ratio study over random independent-set networks: one row per
/// (vertices, pct) cell, in config order.
std::vector<ExperimentRow> run_mis_experiment(const ExperimentConfig& config);

}  // namespace spnmap
