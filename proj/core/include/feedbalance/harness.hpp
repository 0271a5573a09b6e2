#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "feedbalance/baselines.hpp"
#include "feedbalance/dynamics.hpp"
#include "feedbalance/generators.hpp"
#include "feedbalance/graph.hpp"
#include "feedbalance/optimizer.hpp"

namespace feedbalance {

/// 1 − f(A*) / f(A): reduction of P + D at equilibrium.
double RhoEq(const Graph& g, const Graph& g_star, const OpinionVector& s,
             const SolverConfig& cfg = {});

/// 1 − f(A*) / (P(s) + D(s, A)): reduction relative to the innate opinions
/// on the original graph.
double RhoZero(const Graph& g, const Graph& g_star, const OpinionVector& s,
               const SolverConfig& cfg = {});

/// P(s) + D(s, A), the denominator of RhoZero.
double InnateObjective(const Graph& g, const OpinionVector& s);

enum class MethodKind { kLcgd, kBaseline };

struct Method {
  std::string name;
  MethodKind kind = MethodKind::kLcgd;
  OptimizerConfig optimizer;
  BaselineOptions baseline;
};

/// "lcgd" (ADAM), "lcgd_plain", or a baseline name; configs are copied from
/// the given defaults.
Method MakeMethod(const std::string& name, const OptimizerConfig& optimizer,
                  const BaselineOptions& baseline);

struct EvalReport {
  std::string method;
  double rho_eq = 0.0;
  double rho_0 = 0.0;
  ObjectiveValue f_before;
  ObjectiveValue f_after;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string fingerprint;
  std::uint64_t seed = 0;
  /// Empty on success.
  std::string error;
};

enum class OpinionSource { kGaussianTwoCommunity, kUniform, kGiven };

struct OpinionSpec {
  OpinionSource source = OpinionSource::kGaussianTwoCommunity;
  double polarization = 1.0;
  GaussianOpinionParams gaussian;
  /// Used with kGiven.
  std::optional<OpinionVector> values;
  /// kGiven only: values are equilibrium opinions (innate opinions are
  /// inferred) rather than innate opinions.
  bool given_are_equilibrium = true;
  /// Community labels for the Gaussian model; Kernighan–Lin bisection of the
  /// graph when absent.
  std::optional<std::vector<int>> labels;
};

struct ExperimentSpec {
  /// Generated when `graph` is empty.
  GeneratorConfig generator;
  std::optional<Graph> graph;
  OpinionSpec opinions;
  std::vector<Method> methods;
  SolverConfig solver;
  std::uint64_t seed = 1;
  bool record_timing = true;
};

struct Experiment {
  /// Row-normalized input graph.
  Graph graph;
  /// Mean-centered innate opinions used by every method.
  OpinionVector innate;
  std::vector<EvalReport> reports;
  /// Output matrix per method (the input graph for failed methods).
  std::vector<Graph> outputs;
  std::vector<RunTrace> traces;
};

/// Samples or loads opinions, row-normalizes, infers innate opinions and
/// runs each method. Method failures land in the report's `error` field;
/// setup failures throw.
Experiment RunExperiment(const ExperimentSpec& spec);

/// Innate opinions for a graph per the evaluation scheme: obtain equilibrium
/// opinions z (sampled or given), then s = mean_center((2I − A)z).
OpinionVector PrepareInnateOpinions(const Graph& g, const OpinionSpec& spec,
                                    std::uint64_t seed);

struct SweepSpec {
  GeneratorConfig network;
  OpinionSpec opinions;
  std::vector<double> polarization_grid{1.0};
  /// Empty keeps network.inter_probability.
  std::vector<double> beta_sbm_grid;
  std::vector<double> budget_grid{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> methods{"lcgd", "neutral_view", "oppo_view", "pop"};
  OptimizerConfig optimizer;
  BaselineOptions baseline;
  int threads = 1;
  bool record_timing = true;
};

void Validate(const SweepSpec& spec);

struct SweepRow {
  std::string network;
  NodeId n = 0;
  EdgeIndex m = 0;
  double p = 0.0;
  double beta_sbm = 0.0;
  double budget = 0.0;
  std::string method;
  double rho_eq = 0.0;
  double rho_0 = 0.0;
  double f_before = 0.0;
  double f_after = 0.0;
  int iters = 0;
  double time_s = 0.0;
  std::uint64_t seed = 0;
  std::string error;
};

/// One row per (p, β_sbm, budget, seed, method), ordered by that nesting.
/// Cells run on `threads` workers; output order does not depend on it.
std::vector<SweepRow> RunSweep(const SweepSpec& spec);

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

struct BruteForceResult {
  double best_parameter = 0.0;
  double best_objective = 0.0;
  double worst_objective = 0.0;
  /// s = 0, or the objective is flat over the family.
  bool degenerate = false;
};

/// Doubly stochastic 4-cycle 0-1-2-3-0: weight a on {0,1} and {2,3}, 1 − a
/// on {1,2} and {3,0}, stored in both directions.
Graph Cycle4Family(double a);

/// Grid search of sᵀ(2I − A(a))⁻¹s over `points` evenly spaced a in [lo, hi],
/// evaluated with dense elimination.
BruteForceResult BruteForceUndirectedOptimum(
    const std::function<Graph(double)>& family, const OpinionVector& s,
    int points = 10000, double lo = 0.0, double hi = 1.0);

}  // namespace feedbalance
