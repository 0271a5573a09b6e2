#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feedbalance/dynamics.hpp"
#include "feedbalance/errors.hpp"
#include "feedbalance/graph.hpp"
#include "feedbalance/linsolve.hpp"
#include "feedbalance/opinions.hpp"
#include "feedbalance/projection.hpp"

namespace feedbalance {

/// kDirected keeps rows stochastic; kUndirected keeps the matrix doubly
/// stochastic on a symmetric pattern and minimizes sᵀ(2I − A)⁻¹s.
enum class OptimizationMode { kDirected, kUndirected };

enum class Stepper { kAdam, kPlain };

/// Step size used by the plain stepper. kInverseLipschitz uses 1/‖s‖² and is
/// only accepted in undirected mode.
enum class PlainStepRule { kFixed, kInverseLipschitz };

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerConfig {
  double step_size = 0.2;
  /// δ = delta_per_edge · m unless `delta` is set.
  double delta_per_edge = 1e-6;
  std::optional<double> delta;
  /// Weight of the projected iterate against the initial matrix.
  double budget = 1.0;
  int max_iterations = 500;
  OptimizationMode mode = OptimizationMode::kDirected;
  Stepper stepper = Stepper::kAdam;
  PlainStepRule plain_rule = PlainStepRule::kFixed;
  AdamParams adam;
  SolverConfig solver;
  SinkhornOptions sinkhorn;
  /// Solve z1 and z2 concurrently. Results do not depend on this flag.
  bool parallel_solves = false;
};

void Validate(const OptimizerConfig& cfg);

/// Stopping tolerance for a graph with `num_edges` stored edges.
double ResolvedDelta(const OptimizerConfig& cfg, EdgeIndex num_edges);

/// ∂f/∂A on the stored edges, plus the auxiliary vectors and f from the same
/// solves.
struct EdgeGradient {
  std::vector<double> values;
  std::vector<double> z1;
  std::vector<double> z2;
  std::vector<double> z3;
  double objective = 0.0;
  std::array<std::int64_t, 3> solver_iterations{};
};

/// Directed objective: grad_ij = (z1 + 2 z3)_i z2_j + ½ z2_j².
EdgeGradient Gradient(const Graph& g, const OpinionVector& s,
                      const SolverConfig& cfg = {}, bool parallel = false);

/// Undirected objective f = sᵀ(2I − A)⁻¹s: grad_ij = z1_i z2_j, two solves.
/// z3 is left empty.
EdgeGradient UndirectedGradient(const Graph& g, const OpinionVector& s,
                                const SolverConfig& cfg = {},
                                bool parallel = false);

/// ‖s‖², an upper bound on the Lipschitz constant of the undirected
/// objective's gradient.
double LipschitzUpperBound(const OpinionVector& s);

struct TraceRow {
  int iteration = 0;
  /// f at the iterate entering this iteration.
  double objective = 0.0;
  std::array<std::int64_t, 3> solver_iterations{};
  double wall_ms = 0.0;
};

enum class StopReason { kConverged, kMaxIterations };

const char* StopReasonName(StopReason reason);

struct RunTrace {
  std::vector<TraceRow> rows;
  StopReason reason = StopReason::kMaxIterations;
  double delta = 0.0;
  double initial_objective = 0.0;
  /// f of the returned matrix, recomputed at exit.
  double final_objective = 0.0;
  /// Iteration whose entering iterate was returned; rows.size() + 1 when the
  /// last, never-logged update won.
  int best_iteration = 0;
};

struct LcgdResult {
  Graph graph;
  RunTrace trace;
};

/// Thrown when a solve or projection fails mid-run; carries the trace so far.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, RunTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const RunTrace& trace() const noexcept { return trace_; }

 private:
  RunTrace trace_;
};

/// Projected gradient descent over matrices sharing the pattern and row sums
/// of `g_init`. Each iteration takes one gradient (three solves), steps with
/// ADAM or plain GD, projects back onto the feasible set and mixes with the
/// initial weights by the budget. Stops once the logged objective drops by at
/// most δ between consecutive iterations. Returns the best iterate seen, so
/// f(A*) never exceeds f(g_init).
///
/// Undirected mode projects with Sinkhorn scaling and then averages each
/// weight with its reverse edge. When clipping leaves a pattern that cannot be
/// scaled, the step is halved (up to 40 times) before giving up.
LcgdResult Lcgd(const Graph& g_init, const OpinionVector& s,
                const OptimizerConfig& cfg = {});

/// The three-node instance s = (1, 0, −1) with the two row-stochastic
/// matrices used to argue that the objective is not convex, evaluated both
/// with the library objective and with the Laplacian-form variant
/// (centered P + zᵀ(I − A)z). `witness_*` is a second pair (the two
/// orientations of the 3-cycle) on which the library objective itself
/// violates midpoint convexity.
struct ConvexityReport {
  double midpoint = 0.0;
  double average = 0.0;
  double laplacian_midpoint = 0.0;
  double laplacian_average = 0.0;
  double witness_midpoint = 0.0;
  double witness_average = 0.0;
  double elapsed_s = 0.0;

  bool violated() const { return midpoint > average; }
  bool witness_violated() const { return witness_midpoint > witness_average; }
};

ConvexityReport ConvexityCounterexampleCheck(const SolverConfig& cfg = {});

/// Multi-line human-readable summary, values to 4 decimals.
std::string FormatConvexityReport(const ConvexityReport& report);

}  // namespace feedbalance
