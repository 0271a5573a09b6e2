#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "feedbalance/errors.hpp"
#include "feedbalance/graph.hpp"
#include "test_support.hpp"

namespace feedbalance {
namespace {

Graph TwoNode() { return Graph::FromEdges(2, {{0, 1, 1.0}, {1, 0, 1.0}}); }

TEST(GraphTest, FromEdgesSortsIntoCanonicalCsr) {
  const Graph g = Graph::FromEdges(3, {{2, 0, 1.0}, {0, 2, 3.0}, {0, 1, 2.0}});
  ASSERT_EQ(g.num_nodes(), 3);
  ASSERT_EQ(g.num_edges(), 3);
  EXPECT_EQ(std::vector<EdgeIndex>(g.row_offsets().begin(),
                                   g.row_offsets().end()),
            (std::vector<EdgeIndex>{0, 2, 2, 3}));
  EXPECT_EQ(g.Neighbors(0)[0], 1);
  EXPECT_EQ(g.Neighbors(0)[1], 2);
  EXPECT_DOUBLE_EQ(g.Weight(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(g.Weight(1, 0), 0.0);
  EXPECT_FALSE(g.FindEdge(1, 2).has_value());
}

TEST(GraphTest, RejectsNegativeWeightsAndBadIds) {
  EXPECT_THROW(Graph::FromEdges(2, {{0, 1, -1.0}}), ValidationError);
  EXPECT_THROW(Graph::FromEdges(2, {{0, 2, 1.0}}), ValidationError);
  EXPECT_THROW(Graph::FromEdges(2, {{0, 1, 1.0}, {0, 1, 2.0}}),
               ValidationError);
}

TEST(GraphTest, DuplicatePolicies) {
  const std::vector<Edge> dup{{0, 1, 1.0}, {0, 1, 2.5}};
  EXPECT_DOUBLE_EQ(
      Graph::FromEdges(2, dup, DuplicatePolicy::kKeepMax).Weight(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(Graph::FromEdges(2, dup, DuplicatePolicy::kSum).Weight(0, 1),
                   3.5);
}

TEST(GraphTest, CsrConstructorValidatesOrdering) {
  EXPECT_THROW(Graph({0, 2}, {1, 0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(Graph({0, 1}, {0}, {1.0, 2.0}), ValidationError);
  EXPECT_NO_THROW(Graph({0, 1, 2}, {1, 0}, {1.0, 1.0}));
}

TEST(GraphTest, DegreesOfReciprocalPair) {
  const Graph g = TwoNode();
  EXPECT_EQ(Degrees(g, Direction::kOut), (DegreeVector{1.0, 1.0}));
  EXPECT_EQ(Degrees(g, Direction::kIn), (DegreeVector{1.0, 1.0}));
}

TEST(GraphTest, DegreesOfStar) {
  const double third = 1.0 / 3.0;
  const Graph g =
      Graph::FromEdges(4, {{0, 1, third}, {0, 2, third}, {0, 3, third}});
  const DegreeVector out = Degrees(g, Direction::kOut);
  const DegreeVector in = Degrees(g, Direction::kIn);
  EXPECT_NEAR(out[0], 1.0, 1e-15);
  EXPECT_EQ(out[1], 0.0);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(in[j], third);
  EXPECT_EQ(in[0], 0.0);
}

TEST(GraphTest, DegreesOfEmptyGraph) {
  const Graph g = Graph::FromEdges(3, {});
  EXPECT_EQ(Degrees(g, Direction::kIn), (DegreeVector{0.0, 0.0, 0.0}));
  EXPECT_EQ(Degrees(g, Direction::kOut), (DegreeVector{0.0, 0.0, 0.0}));
}

TEST(GraphTest, RowNormalizeExamples) {
  const Graph g = Graph::FromEdges(3, {{0, 1, 2.0}, {0, 2, 2.0}, {1, 0, 1.0},
                                       {1, 2, 3.0}});
  const RowNormalization r = RowNormalize(g);
  EXPECT_DOUBLE_EQ(r.graph.Weight(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(r.graph.Weight(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(r.graph.Weight(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(r.graph.Weight(1, 2), 0.75);
  EXPECT_EQ(r.empty_rows, (std::vector<NodeId>{2}));
  EXPECT_TRUE(r.graph.SamePattern(g));
}

TEST(GraphTest, RowNormalizeIsIdempotentBitForBit) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 5.0);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < 30; ++i) {
      for (NodeId j = 0; j < 30; ++j) {
        if (i != j && unif(rng) < 0.5) edges.push_back({i, j, unif(rng)});
      }
    }
    const Graph g = Graph::FromEdges(30, edges);
    const Graph once = RowNormalize(g).graph;
    const Graph twice = RowNormalize(once).graph;
    ASSERT_TRUE(once.SamePattern(g));
    ASSERT_LE(MaxRowSumDeviation(once), 1e-12);
    for (EdgeIndex k = 0; k < once.num_edges(); ++k) {
      ASSERT_EQ(once.weights()[k], twice.weights()[k]);
    }
    const DegreeVector out = Degrees(once, Direction::kOut);
    for (NodeId i = 0; i < once.num_nodes(); ++i) {
      if (once.out_count(i) > 0) {
        ASSERT_NEAR(out[i], 1.0, 1e-12);
      }
    }
  }
}

TEST(GraphTest, TransposedAndReverseIndex) {
  const Graph g = Graph::FromEdges(3, {{0, 1, 0.3}, {1, 0, 0.7}, {1, 2, 0.2}});
  const Graph t = g.Transposed();
  EXPECT_DOUBLE_EQ(t.Weight(1, 0), 0.3);
  EXPECT_DOUBLE_EQ(t.Weight(2, 1), 0.2);
  const auto rev = g.ReverseEdgeIndex();
  EXPECT_EQ(rev[*g.FindEdge(0, 1)], *g.FindEdge(1, 0));
  EXPECT_EQ(rev[*g.FindEdge(1, 2)], -1);
  EXPECT_FALSE(g.HasSymmetricPattern());
  EXPECT_TRUE(g.SymmetrizedMax().HasSymmetricPattern());
  EXPECT_DOUBLE_EQ(g.SymmetrizedMax().Weight(0, 1), 0.7);
}

TEST(GraphTest, WithWeightsSharesPatternAndCompactedDropsZeros) {
  const Graph g = TwoNode();
  const Graph w = g.WithWeights({0.0, 2.0});
  EXPECT_TRUE(w.SamePattern(g));
  EXPECT_THROW(g.WithWeights({1.0}), ValidationError);
  EXPECT_THROW(g.WithWeights({-1.0, 1.0}), ValidationError);
  const Graph c = w.Compacted();
  EXPECT_EQ(c.num_edges(), 1);
  EXPECT_DOUBLE_EQ(c.Weight(1, 0), 2.0);
}

TEST(GraphTest, ColumnDeviation) {
  const Graph g = Graph::FromEdges(2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 1.0}});
  EXPECT_DOUBLE_EQ(MaxRowSumDeviation(g), 0.0);
  EXPECT_DOUBLE_EQ(MaxColumnSumDeviation(g), 0.5);
}

}  // namespace
}  // namespace feedbalance
