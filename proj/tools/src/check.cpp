#include "check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <spdlog/fmt/fmt.h>

#include "feedbalance/dynamics.hpp"
#include "feedbalance/generators.hpp"
#include "feedbalance/harness.hpp"
#include "feedbalance/optimizer.hpp"
#include "feedbalance/projection.hpp"
#include "feedbalance/reference.hpp"

namespace feedbalance::cli {

namespace {

Graph RandomGraph(NodeId n, double density, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.model = GraphModel::kErdosRenyi;
  cfg.n = n;
  cfg.edge_probability = density;
  cfg.seed = seed;
  return Generate(cfg);
}

OpinionVector RandomOpinions(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return MeanCenter(OpinionVector(std::move(v)));
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

CheckItem Item(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

}  // namespace

std::vector<CheckItem> RunCheckBattery() {
  std::vector<CheckItem> items;

  const ConvexityReport conv = ConvexityCounterexampleCheck();
  items.push_back(Item("three-node instance: f(mid) = 0.87 +- 0.005",
                       std::abs(conv.midpoint - 0.87) <= 0.005,
                       fmt::format("f(mid) = {:.4f} (laplacian-form variant "
                                   "{:.4f})",
                                   conv.midpoint, conv.laplacian_midpoint)));
  items.push_back(Item("three-node instance: avg f = 0.84 +- 0.005",
                       std::abs(conv.average - 0.84) <= 0.005,
                       fmt::format("avg f = {:.4f} (laplacian-form variant "
                                   "{:.4f})",
                                   conv.average, conv.laplacian_average)));
  items.push_back(Item("three-node instance: f(mid) > avg f", conv.violated(),
                       conv.violated() ? "non-convex: confirmed"
                                       : "inequality holds on this pair"));
  items.push_back(Item("objective is not midpoint convex (3-cycle pair)",
                       conv.witness_violated(),
                       fmt::format("f(mid) = {:.4f} > avg f = {:.4f}",
                                   conv.witness_midpoint,
                                   conv.witness_average)));

  {
    const Graph two = Graph::FromEdges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const ObjectiveValue v = Objective(two, OpinionVector({1.0, -1.0}));
    const bool ok = std::abs(v.total - 2.0 / 3.0) < 1e-12 &&
                    std::abs(v.polarization - 2.0 / 9.0) < 1e-12 &&
                    std::abs(v.disagreement - 4.0 / 9.0) < 1e-12;
    items.push_back(Item("two-node objective f = 2/3 = 2/9 + 4/9", ok,
                         fmt::format("f = {:.12f}", v.total)));
  }

  {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Graph g = RandomGraph(60, 0.08, seed);
      std::vector<double> b = RandomOpinions(60, seed + 100).values;
      const auto x = SolveShifted(g, Orientation::kForward, b).solution;
      DenseMatrix m = ToDense(g);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
          m(i, j) = (i == j ? 2.0 : 0.0) - m(i, j);
        }
      }
      const auto ref = DenseSolve(m, b);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        num += (x[i] - ref[i]) * (x[i] - ref[i]);
        den += ref[i] * ref[i];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    const Graph g = RandomGraph(30, 0.1, 9);
    const auto zero = SolveShifted(g, Orientation::kForward,
                                   std::vector<double>(30, 0.0));
    items.push_back(Item("BiCGStab matches dense elimination",
                         worst <= 1e-8 && zero.iterations == 0,
                         fmt::format("max relative error {:.2e}", worst)));
  }

  {
    double worst_fast = 0.0;
    double worst_split = 0.0;
    double worst_form = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Graph g = RandomGraph(40, 0.1, seed);
      const OpinionVector s = RandomOpinions(40, seed + 200);
      const ObjectiveValue v = Objective(g, s);
      worst_fast = std::max(
          worst_fast, RelErr(v.total, DenseObjective(ToDense(g), s.values)));
      worst_split =
          std::max(worst_split, RelErr(v.total, v.polarization + v.disagreement));
      worst_form = std::max(
          worst_form, std::abs(Disagreement(g, s.values) -
                               DisagreementQuadraticForm(g, s.values)));
    }
    items.push_back(Item("fast objective matches dense evaluation",
                         worst_fast <= 1e-8,
                         fmt::format("max error {:.2e}", worst_fast)));
    items.push_back(Item("objective equals P + D", worst_split <= 1e-8,
                         fmt::format("max error {:.2e}", worst_split)));
    items.push_back(Item("edge-sum disagreement equals quadratic form",
                         worst_form <= 1e-10,
                         fmt::format("max error {:.2e}", worst_form)));
  }

  {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Graph g = RandomGraph(20, 0.2, seed);
      const OpinionVector s = RandomOpinions(20, seed + 300);
      const EdgeGradient grad = Gradient(g, s);
      const DenseMatrix base = ToDense(g);
      const auto cols = g.col_indices();
      const double h = 1e-6;
      for (NodeId i = 0; i < g.num_nodes(); ++i) {
        for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
          DenseMatrix plus = base;
          DenseMatrix minus = base;
          plus(i, cols[k]) += h;
          minus(i, cols[k]) -= h;
          const double fd = (DenseObjective(plus, s.values) -
                             DenseObjective(minus, s.values)) /
                            (2 * h);
          const double err = std::abs(fd - grad.values[k]) /
                             std::max(std::abs(fd), 1e-3);
          worst = std::max(worst, err);
        }
      }
    }
    items.push_back(Item("gradient matches central differences",
                         worst <= 1e-5,
                         fmt::format("max relative error {:.2e}", worst)));
  }

  {
    const Graph pattern = Graph::FromEdges(
        3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 0, 1.0},
            {2, 1, 1.0}});
    const std::vector<double> raw{-0.5, 0.9, 0.3, 0.9, -1.0, -2.0};
    const Graph p = ProjectRowStochastic(pattern, raw);
    const Graph again = ProjectRowStochastic(p, p.weights());
    double drift = 0.0;
    for (EdgeIndex k = 0; k < p.num_edges(); ++k) {
      drift = std::max(drift, std::abs(p.weights()[k] - again.weights()[k]));
    }
    const bool ok = MaxRowSumDeviation(p) <= 1e-12 && drift <= 1e-15 &&
                    p.weights()[0] == 0.0 && p.weights()[4] == 0.5;
    items.push_back(Item("row-stochastic projection is feasible and idempotent",
                         ok, fmt::format("idempotence drift {:.1e}", drift)));

    const Graph full = Graph::FromEdges(
        2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.25}, {1, 1, 0.75}});
    const SinkhornResult ds = ProjectDoublyStochastic(full, full.weights());
    const double a = std::sqrt(3.0) / (1.0 + std::sqrt(3.0));
    items.push_back(Item("Sinkhorn reproduces the 2x2 limit",
                         std::abs(ds.graph.weights()[0] - a) <= 1e-6,
                         fmt::format("a = {:.8f} (expected {:.8f})",
                                     ds.graph.weights()[0], a)));
  }

  {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Graph g = RandomGraph(80, 0.05, seed);
      const OpinionVector z = RandomOpinions(80, seed + 400);
      const Equilibrium eq = FjEquilibrium(g, InferInnate(g, z));
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        num += std::pow(eq.z_star.values[i] - z.values[i], 2);
        den += z.values[i] * z.values[i];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    items.push_back(Item("innate inference round trip", worst <= 1e-8,
                         fmt::format("max relative error {:.2e}", worst)));
  }

  {
    const OpinionVector s({1.0, 1.0, -1.0, -1.0});
    const BruteForceResult best = BruteForceUndirectedOptimum(Cycle4Family, s);
    OptimizerConfig cfg;
    cfg.mode = OptimizationMode::kUndirected;
    const LcgdResult run = Lcgd(Cycle4Family(0.5), s, cfg);
    const double gap = std::abs(run.trace.final_objective - best.best_objective);
    items.push_back(Item("undirected LcGD reaches the 4-cycle grid optimum",
                         gap <= 1e-3,
                         fmt::format("LcGD {:.6f} vs grid {:.6f}",
                                     run.trace.final_objective,
                                     best.best_objective)));
  }
  return items;
}

}  // namespace feedbalance::cli
