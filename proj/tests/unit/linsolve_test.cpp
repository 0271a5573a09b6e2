#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "feedbalance/errors.hpp"
#include "feedbalance/generators.hpp"
#include "feedbalance/linsolve.hpp"
#include "test_support.hpp"

namespace feedbalance {
namespace {

Graph ReciprocalPair() {
  return Graph::FromEdges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

TEST(LinsolveTest, ApplyShiftedExamples) {
  const Graph pair = ReciprocalPair();
  const std::vector<double> e0 = {1.0, 0.0};
  EXPECT_EQ(ApplyShifted(pair, Orientation::kForward, e0),
            (std::vector<double>{2.0, -1.0}));
  EXPECT_EQ(ApplyShifted(pair, Orientation::kForward, std::vector<double>{0.0, 0.0}),
            (std::vector<double>{0.0, 0.0}));
  const Graph empty = Graph::FromEdges(3, {});
  EXPECT_EQ(ApplyShifted(empty, Orientation::kTranspose,
                         std::vector<double>{1.0, -2.0, 0.5}),
            (std::vector<double>{2.0, -4.0, 1.0}));
  EXPECT_THROW(ApplyShifted(pair, Orientation::kForward, std::vector<double>{1.0}),
               ValidationError);
}

TEST(LinsolveTest, TransposeProductMatchesExplicitTranspose) {
  const Graph g = testing::RandomRowStochastic(300, 0.03, 21);
  const Graph gt = g.Transposed();
  const OpinionVector v = testing::RandomOpinions(300, 22);
  const auto implicit = ApplyShifted(g, Orientation::kTranspose, v.values);
  const auto explicit_t = ApplyShifted(gt, Orientation::kForward, v.values);
  for (std::size_t i = 0; i < implicit.size(); ++i) {
    ASSERT_NEAR(implicit[i], explicit_t[i], 1e-12);
  }
}

TEST(LinsolveTest, SolveExamples) {
  const Graph empty = Graph::FromEdges(2, {});
  const SolveResult half = SolveShifted(empty, Orientation::kForward,
                                        std::vector<double>{1.0, -3.0});
  EXPECT_NEAR(half.solution[0], 0.5, 1e-14);
  EXPECT_NEAR(half.solution[1], -1.5, 1e-14);

  const SolveResult pair = SolveShifted(ReciprocalPair(),
                                        Orientation::kForward,
                                        std::vector<double>{1.0, -1.0});
  EXPECT_NEAR(pair.solution[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(pair.solution[1], -1.0 / 3, 1e-12);
  EXPECT_LE(pair.final_residual, 1e-10);

  const SolveResult zero = SolveShifted(ReciprocalPair(),
                                        Orientation::kTranspose,
                                        std::vector<double>{0.0, 0.0});
  EXPECT_EQ(zero.iterations, 0);
  EXPECT_EQ(zero.solution, (std::vector<double>{0.0, 0.0}));
}

class LinsolveOracleTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LinsolveOracleTest, MatchesDenseLu) {
  const std::uint64_t seed = GetParam();
  const Graph g = testing::RandomRowStochastic(100, 0.08, seed);
  const Eigen::MatrixXd a = testing::DenseOf(g);
  const OpinionVector b = testing::RandomOpinions(100, seed * 7 + 1);
  for (const bool transpose : {false, true}) {
    for (const Preconditioner pre :
         {Preconditioner::kNone, Preconditioner::kJacobi}) {
      SolverConfig cfg;
      cfg.preconditioner = pre;
      const SolveResult r = SolveShifted(
          g, transpose ? Orientation::kTranspose : Orientation::kForward,
          b.values, cfg);
      const Eigen::VectorXd ref =
          testing::EigenShiftedSolve(a, testing::VecOf(b.values), transpose);
      EXPECT_LE(testing::RelativeError(r.solution, ref), 1e-8)
          << "transpose=" << transpose;
      EXPECT_LE(r.final_residual, cfg.rel_tolerance);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, LinsolveOracleTest,
                         ::testing::Values(1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u));

TEST(LinsolveTest, HandlesEmptyRowsAndSelfLoops) {
  Graph g = testing::RandomWithEmptyRows(80, 0.1, 3, {0, 17, 79});
  std::vector<Edge> edges = g.ToEdges();
  // Add a self loop on node 5 and renormalize its row.
  for (Edge& e : edges) {
    if (e.src == 5) e.weight *= 0.5;
  }
  edges.push_back({5, 5, 0.5});
  g = Graph::FromEdges(80, edges);
  const OpinionVector b = testing::RandomOpinions(80, 9);
  const Eigen::MatrixXd a = testing::DenseOf(g);
  SolverConfig cfg;
  cfg.preconditioner = Preconditioner::kJacobi;
  const SolveResult r = SolveShifted(g, Orientation::kTranspose, b.values, cfg);
  EXPECT_LE(testing::RelativeError(
                r.solution,
                testing::EigenShiftedSolve(a, testing::VecOf(b.values), true)),
            1e-8);
}

TEST(LinsolveTest, IterationCapRaisesConvergenceError) {
  const Graph g = testing::RandomRowStochastic(200, 0.05, 31);
  const OpinionVector b = testing::RandomOpinions(200, 32);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  cfg.rel_tolerance = 1e-14;
  try {
    SolveShifted(g, Orientation::kForward, b.values, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best_residual(), 0.0);
    EXPECT_LT(e.best_residual(), 1.0);
    EXPECT_EQ(e.iterations(), 1);
  }
}

TEST(LinsolveTest, RejectsBadInput) {
  const Graph g = ReciprocalPair();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SolveShifted(g, Orientation::kForward,
                            std::vector<double>{nan, 1.0}),
               ValidationError);
  EXPECT_THROW(SolveShifted(g, Orientation::kForward,
                            std::vector<double>{1.0, 2.0, 3.0}),
               ValidationError);
  SolverConfig cfg;
  cfg.rel_tolerance = 0.0;
  EXPECT_THROW(SolveShifted(g, Orientation::kForward,
                            std::vector<double>{1.0, 2.0}, cfg),
               ValidationError);
}

TEST(LinsolveTest, IterationCountIsNearlySizeIndependent) {
  // The operator is well conditioned, so iterations stay small as n grows.
  for (const NodeId n : {1000, 10000}) {
    GeneratorConfig gen;
    gen.n = n;
    gen.edge_probability = 10.0 / n;
    gen.seed = 41;
    const Graph g = Generate(gen);
    const OpinionVector b = testing::RandomOpinions(n, 42);
    const SolveResult r = SolveShifted(g, Orientation::kForward, b.values);
    EXPECT_LE(r.iterations, 40) << "n=" << n;
  }
}

}  // namespace
}  // namespace feedbalance
