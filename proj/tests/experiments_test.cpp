#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spnmap/experiments.hpp"
#include "spnmap/map_solvers.hpp"
#include "test_support.hpp"

namespace spnmap {
namespace {

TEST(RandomGraph, EdgeCounts) {
  EXPECT_EQ(random_graph(4, 100, 7).edges().size(), 6U);
  EXPECT_EQ(random_graph(5, 20, 7).edges().size(), 2U);
  EXPECT_EQ(random_graph(5, 10, 7).edges().size(), 1U);
  EXPECT_EQ(edge_count_for(5, 5), 1U);
  EXPECT_EQ(edge_count_for(5, 25), 3U);
  EXPECT_EQ(edge_count_for(80, 10), 316U);
}

TEST(RandomGraph, Seeding) {
  EXPECT_EQ(random_graph(12, 40, 99).edges(), random_graph(12, 40, 99).edges());
  bool differs = false;
  for (std::uint64_t seed = 1; seed < 10 && !differs; ++seed) {
    differs = random_graph(5, 10, seed).edges() != random_graph(5, 10, 0).edges();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomGraph, RejectsBadArguments) {
  EXPECT_THROW(random_graph(1, 50, 0), std::invalid_argument);
  EXPECT_THROW(random_graph(5, 0, 0), std::invalid_argument);
  EXPECT_THROW(random_graph(5, 100.5, 0), std::invalid_argument);
}

TEST(Ratio, KnownNetworks) {
  EXPECT_NEAR(ratio(testing::mixture()), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(ratio(gap_fragment().network), 2.2, 1e-12);

  std::vector<Node> nodes{Node::product(), Node::leaf(0, {0.3, 0.7}), Node::leaf(1, {0.6, 0.4})};
  nodes[0].children = {1, 2};
  EXPECT_EQ(ratio(Network(std::move(nodes), 0)), 1.0);
}

TEST(Ratio, ZeroEvidenceGivesOne) {
  Evidence e;
  e.set(0, 1);
  e.set(1, 1);
  EXPECT_EQ(ratio(mis_to_spn(testing::chorded_square()).network, e), 1.0);
}

TEST(RandomSpn, ValidAndWithinHeight) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t vars = 1 + seed % 8;
    const Network net = random_spn(vars, 5, 3, seed);
    EXPECT_TRUE(validate(net).empty()) << seed;
    EXPECT_LE(network_stats(net).height, 5U) << seed;
    EXPECT_EQ(net.variable_count(), vars) << seed;
  }
}

TEST(RandomSpn, Deterministic) {
  EXPECT_EQ(serialize_spn(random_spn(6, 4, 3, 42)), serialize_spn(random_spn(6, 4, 3, 42)));
  EXPECT_NE(serialize_spn(random_spn(6, 4, 3, 42)), serialize_spn(random_spn(6, 4, 3, 43)));
}

TEST(RepetitionSeed, DistinctPerCell) {
  EXPECT_EQ(repetition_seed(1, 10, 20, 3), repetition_seed(1, 10, 20, 3));
  EXPECT_NE(repetition_seed(1, 10, 20, 3), repetition_seed(1, 10, 20, 4));
  EXPECT_NE(repetition_seed(1, 10, 20, 3), repetition_seed(1, 10, 40, 3));
  EXPECT_NE(repetition_seed(1, 10, 20, 3), repetition_seed(2, 10, 20, 3));
}

TEST(MisExperiment, RowShape) {
  ExperimentConfig config{{5, 10}, {10, 60}, 20, 5};
  const auto rows = run_mis_experiment(config);
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].vertices, 5U);
  EXPECT_EQ(rows[0].edge_pct, 10.0);
  EXPECT_EQ(rows[1].edge_pct, 60.0);
  EXPECT_EQ(rows[0].nodes, 31U);
  EXPECT_EQ(rows[2].nodes, 111U);
  for (const ExperimentRow& row : rows) {
    ASSERT_EQ(row.ratios.size(), 20U);
    double mean = 0.0;
    for (double r : row.ratios) {
      EXPECT_GE(r, 1.0 - 1e-9);
      mean += r / 20.0;
    }
    EXPECT_NEAR(row.mean_ratio, mean, 1e-12);
    EXPECT_GE(row.stddev_ratio, 0.0);
  }

  const auto again = run_mis_experiment(config);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].ratios, again[i].ratios);
}

TEST(MisExperiment, SingleRepetitionHasZeroSpread) {
  const auto rows = run_mis_experiment(ExperimentConfig{{6}, {50}, 1, 3});
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_EQ(rows[0].stddev_ratio, 0.0);
}

TEST(MisExperiment, RejectsBadConfig) {
  EXPECT_THROW(run_mis_experiment(ExperimentConfig{{5}, {10}, 0, 1}), std::invalid_argument);
  EXPECT_THROW(run_mis_experiment(ExperimentConfig{{1}, {10}, 5, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace spnmap
