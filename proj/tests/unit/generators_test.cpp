#include <cmath>

#include <gtest/gtest.h>

#include "feedbalance/errors.hpp"
#include "feedbalance/generators.hpp"

namespace feedbalance {
namespace {

GeneratorConfig Sbm(NodeId n, double intra, double inter, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.model = GraphModel::kSbm;
  cfg.n = n;
  cfg.block_sizes = {n / 2, n - n / 2};
  cfg.intra_probability = intra;
  cfg.inter_probability = inter;
  cfg.seed = seed;
  return cfg;
}

bool SameGraph(const Graph& a, const Graph& b) {
  if (!a.SamePattern(b)) return false;
  for (EdgeIndex k = 0; k < a.num_edges(); ++k) {
    if (a.weights()[k] != b.weights()[k]) return false;
  }
  return true;
}

TEST(GeneratorsTest, SbmWithoutInterEdgesKeepsBlocksApart) {
  const Graph g = Generate(Sbm(200, 0.05, 0.0, 3));
  const auto labels = SbmBlockLabels(Sbm(200, 0.05, 0.0, 3));
  for (const Edge& e : g.ToEdges()) {
    ASSERT_EQ(labels[e.src], labels[e.dst]);
  }
}

TEST(GeneratorsTest, ErdosRenyiIsSeeded) {
  GeneratorConfig cfg;
  cfg.model = GraphModel::kErdosRenyi;
  cfg.n = 1000;
  cfg.edge_probability = 0.01;
  cfg.seed = 7;
  EXPECT_TRUE(SameGraph(Generate(cfg), Generate(cfg)));
  GeneratorConfig other = cfg;
  other.seed = 8;
  EXPECT_FALSE(SameGraph(Generate(cfg), Generate(other)));
}

TEST(GeneratorsTest, DifferentSeedsDifferForEveryModel) {
  for (const GraphModel model : {GraphModel::kErdosRenyi,
                                 GraphModel::kBarabasiAlbert,
                                 GraphModel::kSbm}) {
    GeneratorConfig cfg;
    cfg.model = model;
    cfg.n = 60;
    cfg.edge_probability = 0.1;
    cfg.intra_probability = 0.2;
    cfg.inter_probability = 0.02;
    cfg.seed = 1;
    GeneratorConfig other = cfg;
    other.seed = 2;
    EXPECT_TRUE(SameGraph(Generate(cfg), Generate(cfg))) << ModelName(model);
    EXPECT_FALSE(SameGraph(Generate(cfg), Generate(other))) << ModelName(model);
  }
}

TEST(GeneratorsTest, SbmEdgeCountMatchesBinomialExpectation) {
  const Graph g = Generate(Sbm(1000, 0.02, 0.002, 11));
  // Ordered pairs: two blocks of 500·499 inside, 2·500·500 across.
  const double intra_pairs = 2.0 * 500 * 499;
  const double inter_pairs = 2.0 * 500 * 500;
  const double mean = intra_pairs * 0.02 + inter_pairs * 0.002;
  const double sd = std::sqrt(intra_pairs * 0.02 * 0.98 +
                              inter_pairs * 0.002 * 0.998);
  EXPECT_LE(std::abs(static_cast<double>(g.num_edges()) - mean), 5 * sd);
}

TEST(GeneratorsTest, EveryRowIsNonEmptyAndStochastic) {
  for (const GraphModel model : {GraphModel::kErdosRenyi,
                                 GraphModel::kBarabasiAlbert,
                                 GraphModel::kSbm}) {
    GeneratorConfig cfg;
    cfg.model = model;
    cfg.n = 300;
    cfg.edge_probability = 0.001;  // sparse enough to need repairs
    cfg.intra_probability = 0.002;
    cfg.inter_probability = 0.0;
    cfg.seed = 5;
    const Graph g = Generate(cfg);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      ASSERT_GT(g.out_count(i), 0) << ModelName(model);
      ASSERT_EQ(g.Weight(i, i), 0.0);
    }
    EXPECT_LE(MaxRowSumDeviation(g), 1e-12);
  }
}

TEST(GeneratorsTest, BarabasiAlbertAttachmentAndSymmetry) {
  GeneratorConfig cfg;
  cfg.model = GraphModel::kBarabasiAlbert;
  cfg.n = 500;
  cfg.attachment = 3;
  const Graph g = Generate(cfg);
  EXPECT_TRUE(g.HasSymmetricPattern());
  for (NodeId i = 0; i < g.num_nodes(); ++i) ASSERT_GE(g.out_count(i), 3);
  cfg.symmetric = false;
  EXPECT_FALSE(Generate(cfg).HasSymmetricPattern());
}

TEST(GeneratorsTest, InvalidConfigsAreRejected) {
  GeneratorConfig cfg = Sbm(100, 0.1, 0.01, 1);
  cfg.block_sizes = {40, 40};
  EXPECT_THROW(Generate(cfg), ValidationError);
  cfg = Sbm(100, 1.5, 0.01, 1);
  EXPECT_THROW(Generate(cfg), ValidationError);
  cfg.n = 1;
  EXPECT_THROW(Validate(cfg), ValidationError);
  GeneratorConfig ba;
  ba.model = GraphModel::kBarabasiAlbert;
  ba.n = 5;
  ba.attachment = 5;
  EXPECT_THROW(Generate(ba), ValidationError);
  EXPECT_THROW(ParseModel("lattice"), ValidationError);
  EXPECT_EQ(ParseModel("er"), GraphModel::kErdosRenyi);
}

}  // namespace
}  // namespace feedbalance
