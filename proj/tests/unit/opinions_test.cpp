#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <gtest/gtest.h>

#include "feedbalance/errors.hpp"
#include "feedbalance/linsolve.hpp"
#include "feedbalance/opinions.hpp"
#include "test_support.hpp"

namespace feedbalance {
namespace {

Graph ReciprocalPair() {
  return Graph::FromEdges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

std::filesystem::path TempFile(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("feedbalance_opinions_" + name);
}

TEST(OpinionsTest, MeanCenterExamples) {
  const OpinionVector a = MeanCenter(OpinionVector({1.0, -1.0}));
  EXPECT_EQ(a.values, (std::vector<double>{1.0, -1.0}));
  EXPECT_TRUE(a.centered);
  EXPECT_EQ(a.removed_mean, 0.0);

  const OpinionVector b = MeanCenter(OpinionVector({2.0, 0.0}));
  EXPECT_EQ(b.values, (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(b.removed_mean, 1.0);
}

TEST(OpinionsTest, MeanCenterLeavesTinyResidual) {
  const OpinionVector v = testing::RandomOpinions(10000, 4, 3.0);
  OpinionVector shifted = v;
  for (double& x : shifted.values) x += 1000.0 / 3.0;
  const OpinionVector c = MeanCenter(shifted);
  EXPECT_LE(std::abs(Mean(c.values)), 1e-12);
  EXPECT_NEAR(c.removed_mean, v.removed_mean + 1000.0 / 3.0, 1e-9);
}

TEST(OpinionsTest, RescaleExamples) {
  EXPECT_EQ(RescaleOpinion(0.3, 1.0), 0.3);
  EXPECT_EQ(RescaleOpinion(-0.42, 1.0), -0.42);
  EXPECT_DOUBLE_EQ(RescaleOpinion(0.25, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(RescaleOpinion(-0.25, 2.0), -0.5);
  EXPECT_EQ(RescaleOpinion(0.0, 3.0), 0.0);
}

TEST(OpinionsTest, UniformIsCenteredAndPolarizesWithP) {
  double previous = 0.0;
  for (const double p : {0.5, 1.0, 2.0, 5.0}) {
    const OpinionVector v = GenerateUniform(20000, p, 3);
    EXPECT_TRUE(v.centered);
    EXPECT_NEAR(Mean(v.values), 0.0, 1e-14);
    const double sq = std::inner_product(v.values.begin(), v.values.end(),
                                         v.values.begin(), 0.0);
    EXPECT_GT(sq, previous);
    previous = sq;
  }
  EXPECT_THROW(GenerateUniform(10, 0.0, 1), ValidationError);
}

TEST(OpinionsTest, GaussianCommunitySeparation) {
  const std::size_t n = 100000;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
  const OpinionVector v = GenerateGaussianTwoCommunity(labels, 5.0, 17);
  double sum[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) sum[labels[i]] += v.values[i];
  const double gap = (sum[1] - sum[0]) / (n / 2.0);
  EXPECT_NEAR(gap, 0.5, 0.005);

  const OpinionVector near_zero = GenerateGaussianTwoCommunity(labels, 1e-9, 17);
  sum[0] = sum[1] = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum[labels[i]] += near_zero.values[i];
  EXPECT_NEAR((sum[1] - sum[0]) / (n / 2.0), 0.0, 0.005);

  EXPECT_EQ(GenerateGaussianTwoCommunity(labels, 2.0, 5).values,
            GenerateGaussianTwoCommunity(labels, 2.0, 5).values);
  EXPECT_THROW(GenerateGaussianTwoCommunity({}, 1.0, 1), ValidationError);
  const std::vector<int> bad = {0, 2};
  EXPECT_THROW(GenerateGaussianTwoCommunity(bad, 1.0, 1), ValidationError);
}

TEST(OpinionsTest, InferInnateExamples) {
  const OpinionVector s =
      InferInnate(ReciprocalPair(), OpinionVector({1.0 / 3, -1.0 / 3}));
  EXPECT_NEAR(s.values[0], 1.0, 1e-15);
  EXPECT_NEAR(s.values[1], -1.0, 1e-15);
  const OpinionVector zero =
      InferInnate(ReciprocalPair(), OpinionVector({0.0, 0.0}));
  EXPECT_EQ(zero.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(InferInnate(ReciprocalPair(), OpinionVector({1.0})),
               ValidationError);
}

TEST(OpinionsTest, InferInnateInvertsTheEquilibriumSolve) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = testing::RandomRowStochastic(200, 0.05, seed);
    const OpinionVector z = testing::RandomOpinions(200, seed + 100);
    const OpinionVector s = InferInnate(g, z);
    const SolveResult back = SolveShifted(g, Orientation::kForward, s.values,
                                          {.rel_tolerance = 1e-12});
    EXPECT_LE(testing::RelativeError(back.solution, testing::VecOf(z.values)),
              1e-10);
  }
}

TEST(OpinionsTest, LoadAndSaveRoundTrip) {
  const auto path = TempFile("roundtrip.txt");
  OpinionVector v({0.1, -0.2, 1.0 / 3.0, -4e-17});
  SaveOpinions(v, path);
  EXPECT_EQ(LoadOpinions(path).values, v.values);
  std::filesystem::remove(path);
}

TEST(OpinionsTest, LoadAcceptsNodeValueLines) {
  const auto path = TempFile("indexed.txt");
  {
    std::ofstream out(path);
    out << "# header\n1\t-0.5\n0\t0.5\n";
  }
  EXPECT_EQ(LoadOpinions(path).values, (std::vector<double>{0.5, -0.5}));
  {
    std::ofstream out(path);
    out << "0\t0.5\n0.25\n";
  }
  EXPECT_THROW(LoadOpinions(path), ParseError);
  {
    std::ofstream out(path);
    out << "0.5\nbanana\n";
  }
  try {
    LoadOpinions(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  {
    std::ofstream out(path);
    out << "0\t1\n2\t1\n";
  }
  EXPECT_THROW(LoadOpinions(path), ParseError);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadOpinions(path), Error);
}

}  // namespace
}  // namespace feedbalance
