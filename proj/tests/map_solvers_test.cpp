#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "spnmap/map_solvers.hpp"
#include "spnmap/reductions.hpp"
#include "test_support.hpp"

namespace spnmap {
namespace {

using testing::assignment;
using testing::mixture;

TEST(MaxProduct, Mixture) {
  const MapResult r = max_product(mixture());
  EXPECT_EQ(r.configuration, assignment({0, 0}));
  EXPECT_NEAR(r.value.linear(), 0.3, 1e-12);
  ASSERT_TRUE(r.pd_value);
  EXPECT_NEAR(r.pd_value->linear(), 0.24, 1e-12);
}

TEST(MaxProduct, GapFragmentPicksTheHeavyLeaf) {
  const MapResult r = max_product(gap_fragment().network);
  EXPECT_EQ(r.configuration, assignment({1}));
  EXPECT_NEAR(r.value.linear(), 5.0 / 16.0, 1e-12);
}

TEST(ArgmaxProduct, Mixture) {
  const MapResult r = argmax_product(mixture());
  EXPECT_EQ(r.configuration, assignment({1, 0}));
  EXPECT_NEAR(r.value.linear(), 0.4, 1e-12);
  EXPECT_FALSE(r.pd_value);
}

TEST(ArgmaxProduct, GapFragmentPicksTheSharedCategory) {
  const MapResult r = argmax_product(gap_fragment().network);
  EXPECT_EQ(r.configuration, assignment({0}));
  EXPECT_NEAR(r.value.linear(), 11.0 / 16.0, 1e-12);
}

TEST(ArgmaxProduct, NestedSumsKeepMaxProductCandidate) {
  const Network net = testing::load("nested.spn");
  const MapResult pd = max_product(net);
  EXPECT_EQ(pd.configuration, assignment({1, 1}));
  EXPECT_NEAR(pd.value.linear(), 0.41715, 1e-12);

  const MapResult children_only = argmax_product(net, {}, {AmapCandidates::kChildrenOnly});
  EXPECT_EQ(children_only.configuration, assignment({0, 0}));
  EXPECT_NEAR(children_only.value.linear(), 0.39015, 1e-12);
  EXPECT_LT(children_only.value, pd.value);

  const MapResult amap = argmax_product(net);
  EXPECT_EQ(amap.configuration, assignment({1, 1}));
  EXPECT_EQ(amap.value, exact_map(net).value);
}

TEST(ArgmaxProduct, VariantsAgreeOnHeightTwo) {
  for (const Network& net : {mixture(), mis_to_spn(testing::chorded_square()).network}) {
    EXPECT_EQ(argmax_product(net).configuration,
              argmax_product(net, {}, {AmapCandidates::kChildrenOnly}).configuration);
  }
}

TEST(ExactMap, Mixture) {
  const MapResult r = exact_map(mixture());
  EXPECT_EQ(r.configuration, assignment({1, 0}));
  EXPECT_NEAR(r.value.linear(), 0.4, 1e-12);

  Evidence e;
  e.set(0, 1);
  e.set(1, 1);
  const MapResult fixed = exact_map(mixture(), e);
  EXPECT_EQ(fixed.configuration, assignment({1, 1}));
  EXPECT_NEAR(fixed.value.linear(), 0.15, 1e-12);
}

TEST(ExactMap, ChordedSquareNetwork) {
  const Network net = mis_to_spn(testing::chorded_square()).network;
  EXPECT_NEAR(exact_map(net).value.linear(), 2.0 / 6.0, 1e-12);
}

TEST(ExactMap, TiesGoToTheSmallestConfiguration) {
  std::vector<Node> nodes{Node::product(), Node::leaf(0, {0.5, 0.5}), Node::leaf(1, {0.5, 0.5})};
  nodes[0].children = {1, 2};
  const Network net(std::move(nodes), 0);
  EXPECT_EQ(exact_map(net).configuration, assignment({0, 0}));
  EXPECT_EQ(max_product(net).configuration, assignment({0, 0}));
  EXPECT_EQ(argmax_product(net).configuration, assignment({0, 0}));

  const MapOptions highest{AmapCandidates::kChildrenAndMaxProduct, LeafTies::kHighest};
  EXPECT_EQ(max_product(net, {}, highest).configuration, assignment({1, 1}));
  EXPECT_EQ(argmax_product(net, {}, highest).configuration, assignment({1, 1}));
}

TEST(ArgmaxProduct, HighestLeafTiesSeparateTheSolvers) {
  // All four products tie for max-product, which keeps vertex 1 alone. With
  // highest ties the candidate of vertex 2 also selects its non-neighbour 4.
  const Network net = mis_to_spn(testing::chorded_square()).network;
  const MapOptions highest{AmapCandidates::kChildrenAndMaxProduct, LeafTies::kHighest};
  EXPECT_NEAR(max_product(net).value.linear(), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(max_product(net, {}, highest).value.linear(), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(argmax_product(net).value.linear(), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(argmax_product(net, {}, highest).value.linear(), 2.0 / 6.0, 1e-12);
}

TEST(ExactMap, CapIsEnforced) {
  EXPECT_THROW(exact_map(mixture(), {}, 3), CapExceeded);
  EXPECT_NO_THROW(exact_map(mixture(), {}, 4));
}

TEST(Solvers, ZeroProbabilityEvidence) {
  // Vertex 1 cannot be selected together with its neighbour 2.
  const Network net = mis_to_spn(testing::chorded_square()).network;
  Evidence e;
  e.set(0, 1);
  e.set(1, 1);
  for (Solver s : {Solver::kMaxProduct, Solver::kArgmaxProduct, Solver::kExact}) {
    const MapResult r = solve(net, e, s);
    EXPECT_TRUE(r.value.is_zero()) << to_string(s);
    EXPECT_EQ(r.configuration, assignment({1, 1, 0, 0})) << to_string(s);
  }
  EXPECT_TRUE(max_product(net, e).pd_value->is_zero());
}

TEST(Solvers, ParseNames) {
  EXPECT_EQ(parse_solver("maxprod"), Solver::kMaxProduct);
  EXPECT_EQ(parse_solver("amap"), Solver::kArgmaxProduct);
  EXPECT_EQ(parse_solver("exact"), Solver::kExact);
  EXPECT_FALSE(parse_solver("viterbi"));
  EXPECT_STREQ(to_string(Solver::kArgmaxProduct), "amap");
}

TEST(Solvers, RejectCycles) {
  std::vector<Node> nodes{Node::product(), Node::product(), Node::leaf(0, {0.5, 0.5})};
  nodes[0].children = {1};
  nodes[1].children = {0, 2};
  const Network net(std::move(nodes), 0);
  EXPECT_THROW(max_product(net), std::logic_error);
  EXPECT_THROW(argmax_product(net), std::logic_error);
  EXPECT_THROW(exact_map(net), std::logic_error);
}

TEST(DecisionMap, ChordedSquareThresholds) {
  const ReductionResult r = mis_to_spn(testing::chorded_square());
  EXPECT_TRUE(decision_map(r.network, {}, LogProb::from_linear(2.0 / 6.0), Solver::kExact));
  EXPECT_FALSE(decision_map(r.network, {}, LogProb::from_linear(3.0 / 6.0), Solver::kExact));
  EXPECT_TRUE(decision_map(r.network, {}, LogProb::zero(), Solver::kMaxProduct));
}

TEST(FactorBound, DegreeProducts) {
  const ApproxFactorBound mixture_bound = approx_factor_bound(mixture());
  EXPECT_NEAR(mixture_bound.log2_degree_product, std::log2(3.0), 1e-12);
  EXPECT_TRUE(mixture_bound.has_sum_nodes);
  EXPECT_NEAR(mixture_bound.exponent_bound, kFactorExponent * 17, 1e-12);

  const ApproxFactorBound square_bound = approx_factor_bound(mis_to_spn(testing::chorded_square()).network);
  EXPECT_NEAR(square_bound.log2_degree_product, 2.0, 1e-12);

  std::vector<Node> nodes{Node::product(), Node::leaf(0, {0.5, 0.5}), Node::leaf(1, {0.5, 0.5})};
  nodes[0].children = {1, 2};
  const ApproxFactorBound none = approx_factor_bound(Network(std::move(nodes), 0));
  EXPECT_EQ(none.log2_degree_product, 0.0);
  EXPECT_FALSE(none.has_sum_nodes);
  EXPECT_TRUE(none.within_bound);
}

}  // namespace
}  // namespace spnmap
