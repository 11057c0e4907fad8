#include "spnmap/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "spnmap/map_solvers.hpp"

namespace spnmap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_ratio_to_linear(LogProb num, LogProb den) {
  if (den.is_zero()) return num.is_zero() ? 1.0 : std::numeric_limits<double>::infinity();
  return std::exp(num.log() - den.log());
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t base, std::size_t vertices, double edge_pct,
                              std::size_t repetition) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ vertices);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(edge_pct));
  return splitmix64(h ^ repetition);
}

std::size_t edge_count_for(std::size_t n, double edge_pct) {
  if (n < 2) throw std::invalid_argument("random graphs need at least 2 vertices");
  if (!(edge_pct > 0.0 && edge_pct <= 100.0)) throw std::invalid_argument("edge percentage must lie in (0, 100]");
  const std::size_t max_edges = n * (n - 1) / 2;
  const auto k = static_cast<std::size_t>(std::floor(edge_pct * static_cast<double>(max_edges) / 100.0 + 0.5));
  return std::clamp<std::size_t>(k, 1, max_edges);
}

Graph random_graph(std::size_t n, double edge_pct, std::uint64_t seed) {
  const std::size_t k = edge_count_for(n, edge_pct);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::mt19937_64 rng(seed);
  Graph g(n);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pairs.size() - 1);
    std::swap(pairs[i], pairs[pick(rng)]);
    g.add_edge(pairs[i].first, pairs[i].second);
  }
  return g;
}

double ratio(const Network& network, const Evidence& evidence, const MapOptions& options) {
  const MapResult amap = argmax_product(network, evidence, options);
  const MapResult pd = max_product(network, evidence, options);
  return log_ratio_to_linear(amap.value, pd.value);
}

namespace {

class SpnGenerator {
 public:
  SpnGenerator(std::size_t max_fanout, std::uint64_t seed)
      : fanout_(std::max<std::size_t>(max_fanout, 2)), rng_(seed) {}

  NodeId build(const std::vector<VarIndex>& scope, std::size_t height, NodeKind parent) {
    if (scope.size() == 1 && (height == 0 || coin(0.45))) return leaf(scope[0]);
    if (scope.size() > 1 && height == 1) {
      std::vector<NodeId> children;
      for (VarIndex v : scope) children.push_back(leaf(v));
      return emit(Node::product(), children, scope, 1);
    }
    const bool as_sum = scope.size() == 1 || (parent == NodeKind::kSum    ? coin(0.2)
                                              : parent == NodeKind::kProduct ? coin(0.8)
                                                                             : coin(0.5));
    return as_sum ? sum(scope, height) : product(scope, height);
  }

  std::vector<Node> take() { return std::move(nodes_); }

 private:
  struct Built {
    NodeId id;
    std::size_t height;
  };

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  NodeId leaf(VarIndex v) {
    std::vector<double> dist;
    if (coin(0.15)) {
      dist = coin(0.5) ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
    } else {
      const double p = std::uniform_real_distribution<double>(0.02, 0.98)(rng_);
      dist = {1.0 - p, p};
    }
    return emit(Node::leaf(v, std::move(dist)), {}, {v}, 0);
  }

  NodeId sum(const std::vector<VarIndex>& scope, std::size_t height) {
    const std::size_t k = uniform(2, fanout_);
    std::vector<NodeId> children;
    std::size_t h = 0;
    auto& shared = by_scope_[scope];
    for (std::size_t j = 0; j < k; ++j) {
      std::optional<Built> reuse;
      if (!shared.empty() && coin(0.15)) {
        const Built& cand = shared[uniform(0, shared.size() - 1)];
        if (cand.height < height && std::find(children.begin(), children.end(), cand.id) == children.end()) {
          reuse = cand;
        }
      }
      if (reuse) {
        children.push_back(reuse->id);
        h = std::max(h, reuse->height + 1);
      } else {
        children.push_back(build(scope, height - 1, NodeKind::kSum));
        h = std::max(h, heights_[children.back()] + 1);
      }
    }
    Node n = Node::sum();
    std::vector<double> w(k);
    for (double& x : w) x = std::uniform_real_distribution<double>(0.05, 1.0)(rng_);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    n.weights = std::move(w);
    return emit(std::move(n), children, scope, h);
  }

  NodeId product(std::vector<VarIndex> scope, std::size_t height) {
    const std::size_t blocks = uniform(2, std::min(fanout_, scope.size()));
    std::shuffle(scope.begin(), scope.end(), rng_);
    std::vector<std::vector<VarIndex>> parts(blocks);
    for (std::size_t i = 0; i < scope.size(); ++i) {
      parts[i < blocks ? i : uniform(0, blocks - 1)].push_back(scope[i]);
    }
    std::vector<NodeId> children;
    std::size_t h = 0;
    for (auto& part : parts) {
      std::sort(part.begin(), part.end());
      children.push_back(build(part, height - 1, NodeKind::kProduct));
      h = std::max(h, heights_[children.back()] + 1);
    }
    std::sort(scope.begin(), scope.end());
    return emit(Node::product(), children, scope, h);
  }

  NodeId emit(Node n, const std::vector<NodeId>& children, const std::vector<VarIndex>& scope,
              std::size_t height) {
    n.children = children;
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(n));
    heights_.push_back(height);
    by_scope_[scope].push_back({id, height});
    return id;
  }

  std::size_t fanout_;
  std::mt19937_64 rng_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> heights_;
  std::map<std::vector<VarIndex>, std::vector<Built>> by_scope_;
};

}  // namespace

Network random_spn(std::size_t variables, std::size_t max_height, std::size_t max_fanout,
                   std::uint64_t seed) {
  if (variables == 0) throw std::invalid_argument("random_spn needs at least one variable");
  const std::size_t height = variables > 1 ? std::max<std::size_t>(max_height, 1) : max_height;
  std::vector<VarIndex> scope(variables);
  std::iota(scope.begin(), scope.end(), VarIndex{0});
  SpnGenerator gen(max_fanout, seed);
  const NodeId root = gen.build(scope, height, NodeKind::kLeaf);
  return Network(gen.take(), root);
}

std::vector<ExperimentRow> run_mis_experiment(const ExperimentConfig& config) {
  if (config.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  using Clock = std::chrono::steady_clock;
  const MapOptions options{AmapCandidates::kChildrenAndMaxProduct, config.leaf_ties};
  std::vector<ExperimentRow> rows;
  for (std::size_t n : config.vertex_counts) {
    if (n < 2) throw std::invalid_argument("vertex counts must be at least 2");
    for (double pct : config.edge_percentages) {
      ExperimentRow row;
      row.vertices = n;
      row.edge_pct = pct;
      double ms_pd = 0.0;
      double ms_amap = 0.0;
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        const Graph g = random_graph(n, pct, repetition_seed(config.seed, n, pct, rep));
        const ReductionResult r = mis_to_spn(g);
        row.nodes = r.network.size();

        const auto t0 = Clock::now();
        const MapResult pd = max_product(r.network, {}, options);
        const auto t1 = Clock::now();
        const MapResult amap = argmax_product(r.network, {}, options);
        const auto t2 = Clock::now();
        ms_pd += std::chrono::duration<double, std::milli>(t1 - t0).count();
        ms_amap += std::chrono::duration<double, std::milli>(t2 - t1).count();
        row.ratios.push_back(log_ratio_to_linear(amap.value, pd.value));
      }
      const auto reps = static_cast<double>(config.repetitions);
      row.mean_ratio = std::accumulate(row.ratios.begin(), row.ratios.end(), 0.0) / reps;
      if (config.repetitions > 1) {
        double ss = 0.0;
        for (double x : row.ratios) ss += (x - row.mean_ratio) * (x - row.mean_ratio);
        row.stddev_ratio = std::sqrt(ss / (reps - 1.0));
      }
      row.mean_ms_max_product = ms_pd / reps;
      row.mean_ms_argmax_product = ms_amap / reps;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace spnmap
