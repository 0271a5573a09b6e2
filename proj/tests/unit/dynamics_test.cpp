#include <cmath>

#include <gtest/gtest.h>

#include "feedbalance/dynamics.hpp"
#include "feedbalance/errors.hpp"
#include "feedbalance/reference.hpp"
#include "test_support.hpp"

namespace feedbalance {
namespace {

Graph ReciprocalPair() {
  return Graph::FromEdges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

TEST(DynamicsTest, FjStepExamples) {
  const Graph pair = ReciprocalPair();
  const OpinionVector zero({0.0, 0.0});
  EXPECT_EQ(FjStep(pair, zero, zero).values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(FjStep(pair, zero, OpinionVector({1.0, -1.0})).values,
            (std::vector<double>{0.5, -0.5}));
}

TEST(DynamicsTest, EquilibriumExamples) {
  const Graph pair = ReciprocalPair();
  const Equilibrium eq = FjEquilibrium(pair, OpinionVector({1.0, -1.0}));
  EXPECT_NEAR(eq.z_star.values[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(eq.z_star.values[1], -1.0 / 3, 1e-12);

  EXPECT_EQ(FjEquilibrium(pair, OpinionVector({0.0, 0.0})).z_star.values,
            (std::vector<double>{0.0, 0.0}));

  // An edgeless graph leaves everyone at their innate opinion.
  const Graph empty = Graph::FromEdges(3, {});
  const OpinionVector s({0.5, -0.25, -0.25});
  const Equilibrium iso = FjEquilibrium(empty, s);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(iso.z_star.values[i], s.values[i], 1e-15);
}

TEST(DynamicsTest, EquilibriumIsFixedPointOfStep) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = testing::RandomWithEmptyRows(150, 0.05, seed, {3, 99});
    const OpinionVector s = testing::RandomOpinions(150, seed + 50);
    const Equilibrium eq = FjEquilibrium(g, s);
    const OpinionVector next = FjStep(g, eq.z_star, s);
    for (std::size_t i = 0; i < next.size(); ++i) {
      ASSERT_NEAR(next.values[i], eq.z_star.values[i], 1e-9);
    }
  }
}

TEST(DynamicsTest, IteratedStepsConvergeToEquilibrium) {
  const Graph g = testing::RandomRowStochastic(60, 0.1, 8);
  const OpinionVector s = testing::RandomOpinions(60, 9);
  OpinionVector z = s;
  for (int k = 0; k < 80; ++k) z = FjStep(g, z, s);
  const Equilibrium eq = FjEquilibrium(g, s, {.rel_tolerance = 1e-14});
  for (std::size_t i = 0; i < z.size(); ++i) {
    ASSERT_NEAR(z.values[i], eq.z_star.values[i], 1e-12);
  }
}

TEST(DynamicsTest, IndexExamples) {
  const std::vector<double> pm = {1.0, -1.0};
  const std::vector<double> third = {1.0 / 3, -1.0 / 3};
  EXPECT_DOUBLE_EQ(Polarization(pm), 2.0);
  EXPECT_DOUBLE_EQ(Polarization(third), 2.0 / 9);
  EXPECT_NEAR(Polarization(std::vector<double>{0.7, 0.7, 0.7}), 0.0, 1e-30);

  const Graph pair = ReciprocalPair();
  EXPECT_DOUBLE_EQ(Disagreement(pair, pm), 4.0);
  EXPECT_DOUBLE_EQ(Disagreement(pair, third), 4.0 / 9);
  EXPECT_EQ(Disagreement(pair, std::vector<double>{2.0, 2.0}), 0.0);
}

TEST(DynamicsTest, QuadraticFormMatchesEdgeSumOnRowStochastic) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = testing::RandomRowStochastic(120, 0.05, seed);
    const OpinionVector z = testing::RandomOpinions(120, seed + 10);
    const double edge_sum = Disagreement(g, z.values);
    EXPECT_NEAR(DisagreementQuadraticForm(g, z.values), edge_sum,
                1e-10 * std::max(1.0, edge_sum));
  }
}

TEST(DynamicsTest, ObjectiveTwoNodeExample) {
  const ObjectiveValue v = Objective(ReciprocalPair(), OpinionVector({1.0, -1.0}));
  EXPECT_NEAR(v.total, 2.0 / 3, 1e-12);
  EXPECT_NEAR(v.polarization, 2.0 / 9, 1e-12);
  EXPECT_NEAR(v.disagreement, 4.0 / 9, 1e-12);
  EXPECT_NEAR(v.polarization_centered, 2.0 / 9, 1e-12);
}

TEST(DynamicsTest, ObjectiveMatchesDenseOracles) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Graph g = testing::RandomRowStochastic(90, 0.07, seed);
    const OpinionVector s = testing::RandomOpinions(90, seed + 3);
    const ObjectiveValue v = Objective(g, s);
    const double eigen =
        testing::EigenObjective(testing::DenseOf(g), testing::VecOf(s.values));
    const double dense = DenseObjective(ToDense(g), s.values);
    EXPECT_NEAR(v.total, eigen, 1e-8 * eigen);
    EXPECT_NEAR(v.total, dense, 1e-8 * dense);
    EXPECT_NEAR(v.total, v.polarization + v.disagreement, 1e-9 * v.total);
  }
}

TEST(DynamicsTest, ObjectiveIsNonNegativeAndZeroForZeroOpinions) {
  const Graph g = testing::RandomRowStochastic(50, 0.1, 77);
  EXPECT_EQ(Objective(g, OpinionVector(std::vector<double>(50, 0.0))).total, 0.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    EXPECT_GE(Objective(g, testing::RandomOpinions(50, seed)).total, 0.0);
  }
}

TEST(DynamicsTest, ParallelTermsAreBitIdentical) {
  const Graph g = testing::RandomRowStochastic(400, 0.02, 5);
  const OpinionVector s = testing::RandomOpinions(400, 6);
  const ObjectiveTerms seq = SolveObjectiveTerms(g, s.values, {}, false);
  const ObjectiveTerms par = SolveObjectiveTerms(g, s.values, {}, true);
  EXPECT_EQ(seq.z1, par.z1);
  EXPECT_EQ(seq.z2, par.z2);
  EXPECT_EQ(seq.z3, par.z3);
  EXPECT_EQ(seq.value, par.value);
}

TEST(DynamicsTest, RejectsNonStochasticRows) {
  const Graph g = Graph::FromEdges(2, {{0, 1, 0.5}, {1, 0, 1.0}});
  EXPECT_THROW(RequireRowStochastic(g), ValidationError);
  EXPECT_THROW(FjEquilibrium(g, OpinionVector({1.0, -1.0})), ValidationError);
  EXPECT_THROW(Objective(g, OpinionVector({1.0, -1.0})), ValidationError);
  EXPECT_NO_THROW(RequireRowStochastic(ReciprocalPair()));
}

}  // namespace
}  // namespace feedbalance
