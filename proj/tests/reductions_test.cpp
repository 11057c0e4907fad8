#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "spnmap/map_solvers.hpp"
#include "spnmap/reductions.hpp"
#include "test_support.hpp"

namespace spnmap {
namespace {

using testing::chorded_square;
using testing::two_clause;

double log_gap(LogProb a, LogProb b) { return testing::relative_gap(a.log(), b.log()); }

TEST(Graph, EdgesAreSimple) {
  Graph g(3);
  EXPECT_TRUE(g.add_edge(2, 0));
  EXPECT_FALSE(g.add_edge(0, 2));
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 3), std::invalid_argument);
  EXPECT_EQ(g.edges().size(), 1U);
  EXPECT_EQ(g.edges()[0], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(g.degree(0), 1U);
  EXPECT_EQ(g.degree(1), 0U);
}

TEST(MisToSpn, ChordedSquare) {
  const ReductionResult r = mis_to_spn(chorded_square());
  EXPECT_EQ(*r.normalizer, 6);
  EXPECT_EQ(r.network.size(), 21U);
  const Node& root = r.network.node(0);
  ASSERT_EQ(root.weights.size(), 4U);
  EXPECT_NEAR(root.weights[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(root.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(root.weights[2], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(root.weights[3], 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(validate(r.network).empty());
  EXPECT_EQ(network_stats(r.network).height, 2U);
  EXPECT_EQ(scope(r.network, 0), (std::vector<VarIndex>{0, 1, 2, 3}));
}

TEST(MisToSpn, Triangle) {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  const ReductionResult r = mis_to_spn(g);
  EXPECT_EQ(*r.normalizer, 3);
  for (double w : r.network.node(0).weights) EXPECT_NEAR(w, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(exact_map(r.network).value.linear(), 1.0 / 3.0, 1e-12);
}

TEST(MisToSpn, IsolatedVertices) {
  const ReductionResult r = mis_to_spn(Graph(3));
  EXPECT_EQ(*r.normalizer, 12);
  EXPECT_NEAR(exact_map(r.network).value.linear(), 3.0 / 12.0, 1e-12);
}

TEST(MisToSpn, LargeNormalizerStaysExact) {
  const ReductionResult r = mis_to_spn(Graph(80));
  EXPECT_EQ(*r.normalizer, BigInt(80) << 79);
  for (double w : r.network.node(0).weights) EXPECT_NEAR(w, 1.0 / 80.0, 1e-17);
  EXPECT_NEAR(mis_decision_threshold(r, 80).linear(), std::ldexp(1.0, -79), 1e-30);
}

TEST(MisToSpn, RejectsEmptyGraph) { EXPECT_THROW(mis_to_spn(Graph(0)), std::invalid_argument); }

TEST(MisDecisionThreshold, ChordedSquare) {
  const ReductionResult r = mis_to_spn(chorded_square());
  EXPECT_NEAR(mis_decision_threshold(r, 2).linear(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mis_decision_threshold(r, 1).linear(), 1.0 / 6.0, 1e-15);
  EXPECT_TRUE(mis_decision_threshold(r, 0).is_zero());
}

TEST(CnfToSpn, TwoClause) {
  const ReductionResult r = cnf_to_spn(two_clause());
  EXPECT_EQ(r.network.size(), 71U);
  for (double w : r.network.node(0).weights) EXPECT_NEAR(w, 1.0 / 14.0, 1e-15);
  EXPECT_NEAR(r.threshold->linear(), 1.0 / 14.0, 1e-15);
  EXPECT_NEAR(exact_map(r.network).value.linear(), 1.0 / 14.0, 1e-12);
  EXPECT_TRUE(validate(r.network).empty());
  EXPECT_EQ(network_stats(r.network).height, 2U);
}

TEST(CnfToSpn, UnsatisfiableFormula) {
  const ReductionResult r = cnf_to_spn(testing::unsatisfiable_cnf(3, 1, 2, 3));
  EXPECT_NEAR(exact_map(r.network).value.linear(), 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(r.threshold->linear(), 1.0 / 7.0, 1e-15);
}

TEST(CnfToSpn, SingleClause) {
  const ReductionResult r = cnf_to_spn(CnfFormula{3, {{1, 2, 3}}});
  EXPECT_NEAR(exact_map(r.network).value.linear(), 1.0 / 7.0, 1e-12);
  EXPECT_TRUE(decision_map(r.network, {}, *r.threshold, Solver::kExact));
}

TEST(CnfToSpn, RejectsMalformedClauses) {
  EXPECT_THROW(cnf_to_spn(CnfFormula{3, {{1, 1, 2}}}), std::invalid_argument);
  EXPECT_THROW(cnf_to_spn(CnfFormula{3, {{1, 2}}}), std::invalid_argument);
  EXPECT_THROW(cnf_to_spn(CnfFormula{3, {{1, 2, 4}}}), std::invalid_argument);
  EXPECT_THROW(cnf_to_spn(CnfFormula{3, {}}), std::invalid_argument);
}

TEST(AmplificationQ, Values) {
  EXPECT_EQ(amplification_q(2, 100, 0.5), 197U);
  EXPECT_EQ(amplification_q(2, 71, 0.0), 2U);
  EXPECT_EQ(amplification_q(1, 71, 0.0), 1U);
  EXPECT_THROW(amplification_q(0, 71, 0.0), std::invalid_argument);
  EXPECT_THROW(amplification_q(2, 71, 1.0), std::invalid_argument);
  EXPECT_THROW(amplification_q(2, 0, 0.5), std::invalid_argument);
  EXPECT_THROW(amplification_q(1000, 100000, 0.99), std::invalid_argument);
}

TEST(Amplify, TwoClauseTwoCopies) {
  const ReductionResult r = amplify(cnf_to_spn(two_clause()), 2);
  EXPECT_EQ(r.network.size(), 143U);
  EXPECT_EQ(r.network.variable_count(), 8U);
  EXPECT_EQ(r.copies, 2U);
  EXPECT_LT(log_gap(exact_map(r.network).value, LogProb::from_linear(1.0 / 14.0).pow(2)), 1e-9);
  EXPECT_LT(log_gap(*r.threshold, LogProb::from_linear(1.0 / 14.0).pow(2)), 1e-12);
  EXPECT_TRUE(validate(r.network).empty());
  EXPECT_EQ(network_stats(r.network).height, 3U);
}

TEST(Amplify, SingleClauseThreeCopies) {
  const ReductionResult r = amplify(cnf_to_spn(CnfFormula{3, {{1, 2, 3}}}), 3);
  EXPECT_LT(log_gap(exact_map(r.network).value, LogProb::from_linear(1.0 / 7.0).pow(3)), 1e-9);
}

TEST(Amplify, OneCopyIsIdentity) {
  const ReductionResult base = cnf_to_spn(two_clause());
  const ReductionResult same = amplify(base, 1);
  EXPECT_EQ(same.network.size(), base.network.size());
  EXPECT_EQ(serialize_spn(same.network), serialize_spn(base.network));
  EXPECT_THROW(amplify(base, 0), std::invalid_argument);
}

TEST(Amplify, NormalizerIsRaised) {
  const ReductionResult r = amplify(mis_to_spn(chorded_square()), 3);
  EXPECT_EQ(*r.normalizer, 216);
}

TEST(GapFragment, Weights) {
  const Network net = gap_fragment().network;
  EXPECT_TRUE(validate(net).empty());
  EXPECT_NEAR(evaluate(net, testing::assignment({0})).linear(), 11.0 / 16.0, 1e-12);
  EXPECT_NEAR(evaluate(net, testing::assignment({1})).linear(), 5.0 / 16.0, 1e-12);
}

}  // namespace
}  // namespace spnmap
