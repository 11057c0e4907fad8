#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "spnmap/log_prob.hpp"
#include "spnmap/network.hpp"

namespace spnmap {

enum class Solver { kMaxProduct, kArgmaxProduct, kExact };

/// CLI spelling: "maxprod", "amap" or "exact".
const char* to_string(Solver solver);
std::optional<Solver> parse_solver(std::string_view name);

struct MapResult {
  Assignment configuration;
  LogProb value;
  Solver solver = Solver::kExact;
  /// Upward-pass value of max-product; a lower bound on `value`.
  std::optional<LogProb> pd_value;
};

/// Thrown by exact_map when the free configuration space exceeds its cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultExactCap = std::uint64_t{1} << 24;

/// Which configurations a sum node scores in argmax_product.
enum class AmapCandidates {
  /// Each child's argmax-product configuration plus the configuration
  /// max-product selects below the sum node. Never worse than max_product.
  kChildrenAndMaxProduct,
  /// Each child's argmax-product configuration only. Identical results on
  /// height-2 networks; with nested sums it can fall below max_product.
  kChildrenOnly,
};

/// Category a leaf picks when several share its maximum probability.
enum class LeafTies { kLowest, kHighest };

struct MapOptions {
  AmapCandidates candidates = AmapCandidates::kChildrenAndMaxProduct;
  LeafTies leaf_ties = LeafTies::kLowest;
};

/// Max-product: upward pass with sums replaced by weighted maxima, then a
/// downward pass following the maximizing child of every sum node.
/// Sum-node ties go to the lowest child index.
MapResult max_product(const Network& network, const Evidence& evidence = {}, const MapOptions& options = {});

/// Argmax-product: bottom-up, leaves take their most probable category,
/// products concatenate their children's configurations, and each sum node
/// scores candidate configurations under the sum node itself, keeping the
/// best (lowest child index on ties, the max-product candidate last).
MapResult argmax_product(const Network& network, const Evidence& evidence = {}, const MapOptions& options = {});

/// Exhaustive search over the configurations consistent with `evidence`.
/// Ties go to the lexicographically smallest configuration.
MapResult exact_map(const Network& network, const Evidence& evidence = {},
                    std::uint64_t cap = kDefaultExactCap);

MapResult solve(const Network& network, const Evidence& evidence, Solver solver,
                std::uint64_t cap = kDefaultExactCap, const MapOptions& options = {});

/// Decides max_{x ~ e} S(x) >= gamma with the given solver (relative slack
/// 1e-9). Exact answers the decision problem; the approximate solvers give a
/// sound "yes" only.
bool decision_map(const Network& network, const Evidence& evidence, LogProb gamma, Solver solver,
                  std::uint64_t cap = kDefaultExactCap);

/// Exponent constant for the size-based bound on max-product's factor.
inline constexpr double kFactorExponent = 0.5284;

struct ApproxFactorBound {
  /// log2 of the product of sum-node out-degrees (0 with no sum nodes).
  double log2_degree_product = 0.0;
  /// 0.5284 * (nodes + arcs).
  double exponent_bound = 0.0;
  bool has_sum_nodes = false;
  /// log2_degree_product < exponent_bound, or trivially true without sums.
  bool within_bound = true;
};

ApproxFactorBound approx_factor_bound(const Network& network);

}  // namespace spnmap
