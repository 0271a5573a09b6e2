#include "feedbalance/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

namespace feedbalance {

namespace {

using Clock = std::chrono::steady_clock;

// Step halvings tried when clipping leaves a pattern Sinkhorn cannot scale.
constexpr int kMaxBacktracks = 40;

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

class AdamState {
 public:
  AdamState(std::size_t size, const AdamParams& params)
      : params_(params), first_(size, 0.0), second_(size, 0.0) {}

  void Step(std::span<const double> grad, double eta, std::span<double> out) {
    ++t_;
    const double c1 = 1.0 - std::pow(params_.beta1, t_);
    const double c2 = 1.0 - std::pow(params_.beta2, t_);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      first_[k] = params_.beta1 * first_[k] + (1.0 - params_.beta1) * grad[k];
      second_[k] =
          params_.beta2 * second_[k] + (1.0 - params_.beta2) * grad[k] * grad[k];
      const double m_hat = first_[k] / c1;
      const double v_hat = second_[k] / c2;
      out[k] = eta * m_hat / (std::sqrt(v_hat) + params_.epsilon);
    }
  }

 private:
  AdamParams params_;
  std::vector<double> first_;
  std::vector<double> second_;
  int t_ = 0;
};

bool IsDoublyStochastic(const Graph& g, double tol) {
  return MaxRowSumDeviation(g) <= tol && MaxColumnSumDeviation(g) <= tol;
}

// Averages each weight with its reverse edge. Sinkhorn scaling of a symmetric
// matrix is only symmetric up to its tolerance; the average of a doubly
// stochastic matrix and its transpose is still doubly stochastic.
Graph Symmetrized(const Graph& g, const std::vector<EdgeIndex>& reverse) {
  const auto w = g.weights();
  std::vector<double> out(w.begin(), w.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto r = static_cast<std::size_t>(reverse[k]);
    if (k < r) out[k] = out[r] = 0.5 * (w[k] + w[r]);
  }
  return g.WithWeights(std::move(out));
}

#ifndef NDEBUG
void CheckFeasible(const Graph& g, OptimizationMode mode, double tol) {
  const double dev = mode == OptimizationMode::kDirected
                         ? MaxRowSumDeviation(g)
                         : std::max(MaxRowSumDeviation(g),
                                    MaxColumnSumDeviation(g));
  if (dev > tol) {
    throw Error(fmt::format("iterate left the feasible set (deviation {:.3g})",
                            dev));
  }
}
#endif

}  // namespace

void Validate(const OptimizerConfig& cfg) {
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw ValidationError("step size must be positive");
  }
  if (!(cfg.delta_per_edge >= 0.0) || (cfg.delta && !(*cfg.delta >= 0.0))) {
    throw ValidationError("stopping tolerance must be non-negative");
  }
  if (!(cfg.budget >= 0.0 && cfg.budget <= 1.0)) {
    throw ValidationError("budget must lie in [0, 1]");
  }
  if (cfg.max_iterations < 1) {
    throw ValidationError("max_iterations must be at least 1");
  }
  if (!(cfg.adam.beta1 >= 0.0 && cfg.adam.beta1 < 1.0) ||
      !(cfg.adam.beta2 >= 0.0 && cfg.adam.beta2 < 1.0) ||
      !(cfg.adam.epsilon > 0.0)) {
    throw ValidationError("ADAM needs beta1, beta2 in [0, 1) and epsilon > 0");
  }
  if (cfg.stepper == Stepper::kPlain &&
      cfg.plain_rule == PlainStepRule::kInverseLipschitz &&
      cfg.mode != OptimizationMode::kUndirected) {
    throw ValidationError(
        "the 1/||s||^2 step size is only available in undirected mode");
  }
}

double ResolvedDelta(const OptimizerConfig& cfg, EdgeIndex num_edges) {
  return cfg.delta ? *cfg.delta
                   : cfg.delta_per_edge * static_cast<double>(num_edges);
}

EdgeGradient Gradient(const Graph& g, const OpinionVector& s,
                      const SolverConfig& cfg, bool parallel) {
  ObjectiveTerms terms = SolveObjectiveTerms(g, s.values, cfg, parallel);
  EdgeGradient out;
  out.values.resize(static_cast<std::size_t>(g.num_edges()));
  const auto cols = g.col_indices();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const double left = terms.z1[i] + 2.0 * terms.z3[i];
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      const double zj = terms.z2[cols[k]];
      out.values[k] = left * zj + 0.5 * zj * zj;
    }
  }
  out.objective = terms.value;
  out.solver_iterations = terms.iterations;
  out.z1 = std::move(terms.z1);
  out.z2 = std::move(terms.z2);
  out.z3 = std::move(terms.z3);
  return out;
}

EdgeGradient UndirectedGradient(const Graph& g, const OpinionVector& s,
                                const SolverConfig& cfg, bool parallel) {
  SolveResult r1;
  SolveResult r2;
  if (parallel) {
    auto first = std::async(std::launch::async, [&] {
      return SolveShifted(g, Orientation::kTranspose, s.values, cfg);
    });
    r2 = SolveShifted(g, Orientation::kForward, s.values, cfg);
    r1 = first.get();
  } else {
    r1 = SolveShifted(g, Orientation::kTranspose, s.values, cfg);
    r2 = SolveShifted(g, Orientation::kForward, s.values, cfg);
  }
  EdgeGradient out;
  out.values.resize(static_cast<std::size_t>(g.num_edges()));
  const auto cols = g.col_indices();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      out.values[k] = r1.solution[i] * r2.solution[cols[k]];
    }
  }
  out.objective = Dot(s.values, r2.solution);
  out.solver_iterations = {r1.iterations, r2.iterations, 0};
  out.z1 = std::move(r1.solution);
  out.z2 = std::move(r2.solution);
  return out;
}

double LipschitzUpperBound(const OpinionVector& s) {
  return Dot(s.values, s.values);
}

const char* StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged:
      return "converged";
    case StopReason::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

LcgdResult Lcgd(const Graph& g_init, const OpinionVector& s,
                const OptimizerConfig& cfg) {
  Validate(cfg);
  if (s.size() != static_cast<std::size_t>(g_init.num_nodes())) {
    throw ValidationError("opinion vector does not match the graph size");
  }
  if (s.size() > 0 && std::abs(Mean(s.values)) > 1e-9) {
    spdlog::warn("innate opinions are not mean-centered (mean {:.3g})",
                 Mean(s.values));
  }
  const bool undirected = cfg.mode == OptimizationMode::kUndirected;

  Graph init = g_init;
  const std::vector<EdgeIndex> reverse =
      undirected ? g_init.ReverseEdgeIndex() : std::vector<EdgeIndex>{};
  if (undirected) {
    if (std::find(reverse.begin(), reverse.end(), -1) != reverse.end()) {
      throw ValidationError("undirected mode needs a symmetric edge pattern");
    }
    if (!IsDoublyStochastic(g_init, cfg.sinkhorn.tolerance)) {
      spdlog::info("initial matrix is not doubly stochastic; scaling it first");
      init = ProjectDoublyStochastic(g_init, g_init.weights(), cfg.sinkhorn)
                 .graph;
    }
    // Bit-identical for weights that are already symmetric.
    init = Symmetrized(init, reverse);
  } else {
    RequireRowStochastic(g_init);
  }

  double eta = cfg.step_size;
  if (cfg.stepper == Stepper::kPlain &&
      cfg.plain_rule == PlainStepRule::kInverseLipschitz) {
    const double c = LipschitzUpperBound(s);
    if (!(c > 0.0)) {
      throw ValidationError("1/||s||^2 step size is undefined for s = 0");
    }
    eta = 1.0 / c;
  }

  const std::size_t m = static_cast<std::size_t>(init.num_edges());
  const std::vector<double> init_w(init.weights().begin(),
                                   init.weights().end());

  RunTrace trace;
  trace.delta = ResolvedDelta(cfg, init.num_edges());
  AdamState adam(m, cfg.adam);
  std::vector<double> step(m);
  std::vector<double> candidate(m);
  Graph current = init;
  Graph best = init;
  double best_f = std::numeric_limits<double>::infinity();
  bool evaluated = false;

  auto evaluate = [&](const Graph& a) {
    return undirected ? UndirectedGradient(a, s, cfg.solver, cfg.parallel_solves)
                      : Gradient(a, s, cfg.solver, cfg.parallel_solves);
  };

  try {
    for (int t = 1; t <= cfg.max_iterations; ++t) {
      const auto start = Clock::now();
      EdgeGradient grad = evaluate(current);
      evaluated = true;
      TraceRow row;
      row.iteration = t;
      row.objective = grad.objective;
      row.solver_iterations = grad.solver_iterations;
      if (t == 1) trace.initial_objective = grad.objective;
      if (grad.objective < best_f) {
        best_f = grad.objective;
        best = current;
        trace.best_iteration = t;
      }
      const std::size_t logged = trace.rows.size();
      if (logged >= 1 &&
          trace.rows[logged - 1].objective - grad.objective <= trace.delta) {
        row.wall_ms = Seconds(start) * 1e3;
        trace.rows.push_back(row);
        trace.reason = StopReason::kConverged;
        break;
      }

      if (cfg.stepper == Stepper::kAdam) {
        adam.Step(grad.values, eta, step);
      } else {
        for (std::size_t k = 0; k < m; ++k) step[k] = eta * grad.values[k];
      }
      if (undirected) {
        for (std::size_t k = 0; k < m; ++k) {
          const auto r = static_cast<std::size_t>(reverse[k]);
          if (k < r) {
            const double avg = 0.5 * (step[k] + step[r]);
            step[k] = avg;
            step[r] = avg;
          }
        }
      }
      const auto w = current.weights();
      for (std::size_t k = 0; k < m; ++k) candidate[k] = w[k] - step[k];

      Graph projected;
      if (!undirected) {
        projected = ProjectRowStochastic(init, candidate);
      } else {
        // Clipping can zero out entries the pattern needs for total support;
        // shorter steps keep more of the current (feasible) weights.
        double scale = 1.0;
        for (int attempt = 0;; ++attempt) {
          try {
            projected = Symmetrized(
                ProjectDoublyStochastic(init, candidate, cfg.sinkhorn).graph,
                reverse);
            break;
          } catch (const ConvergenceError&) {
            if (attempt == kMaxBacktracks) throw;
          }
          scale *= 0.5;
          for (std::size_t k = 0; k < m; ++k) {
            candidate[k] = w[k] - scale * step[k];
          }
          spdlog::debug("iteration {}: Sinkhorn failed, step scaled by {:g}",
                        t, scale);
        }
      }
      if (cfg.budget == 1.0) {
        current = std::move(projected);
      } else {
        const auto pw = projected.weights();
        std::vector<double> mixed(m);
        for (std::size_t k = 0; k < m; ++k) {
          mixed[k] = cfg.budget * pw[k] + (1.0 - cfg.budget) * init_w[k];
        }
        current = init.WithWeights(std::move(mixed));
      }
      evaluated = false;
#ifndef NDEBUG
      CheckFeasible(current, cfg.mode,
                    undirected ? 10 * cfg.sinkhorn.tolerance : 1e-10);
#endif
      row.wall_ms = Seconds(start) * 1e3;
      trace.rows.push_back(row);
      spdlog::debug("iteration {} f={:.10g} T=({}, {}, {}) {:.2f} ms", t,
                    row.objective, row.solver_iterations[0],
                    row.solver_iterations[1], row.solver_iterations[2],
                    row.wall_ms);
    }

    if (!evaluated) {
      const double f = evaluate(current).objective;
      if (f < best_f) {
        best_f = f;
        best = current;
        trace.best_iteration = static_cast<int>(trace.rows.size()) + 1;
      }
    }
  } catch (const ConvergenceError& e) {
    throw OptimizationError(
        fmt::format("optimization stopped at iteration {}: {}",
                    trace.rows.size() + 1, e.what()),
        std::move(trace));
  }
  trace.final_objective = best_f;
  return {std::move(best), std::move(trace)};
}

ConvexityReport ConvexityCounterexampleCheck(const SolverConfig& cfg) {
  const auto start = Clock::now();
  const OpinionVector s({1.0, 0.0, -1.0});
  auto dense = [](const std::array<std::array<double, 3>, 3>& a) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < 3; ++i) {
      for (NodeId j = 0; j < 3; ++j) {
        if (a[i][j] != 0.0) edges.push_back({i, j, a[i][j]});
      }
    }
    return Graph::FromEdges(3, std::move(edges));
  };
  auto midpoint = [&](const std::array<std::array<double, 3>, 3>& a,
                      const std::array<std::array<double, 3>, 3>& b) {
    std::array<std::array<double, 3>, 3> c{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) c[i][j] = 0.5 * (a[i][j] + b[i][j]);
    }
    return dense(c);
  };
  auto laplacian_form = [&](const Graph& g) {
    const auto z = SolveShifted(g, Orientation::kForward, s.values, cfg);
    return Polarization(z.solution) +
           LaplacianQuadraticForm(g, z.solution);
  };

  const std::array<std::array<double, 3>, 3> a1{
      {{0.0, 1.0, 0.0}, {2.0 / 3.0, 0.0, 1.0 / 3.0}, {1.0, 0.0, 0.0}}};
  const std::array<std::array<double, 3>, 3> a2{
      {{0.0, 1.0, 0.0}, {1.0 / 3.0, 0.0, 2.0 / 3.0}, {0.0, 1.0, 0.0}}};
  const Graph g1 = dense(a1);
  const Graph g2 = dense(a2);
  const Graph mid = midpoint(a1, a2);

  ConvexityReport report;
  report.midpoint = Objective(mid, s, cfg).total;
  report.average =
      0.5 * (Objective(g1, s, cfg).total + Objective(g2, s, cfg).total);
  report.laplacian_midpoint = laplacian_form(mid);
  report.laplacian_average = 0.5 * (laplacian_form(g1) + laplacian_form(g2));

  const std::array<std::array<double, 3>, 3> c1{
      {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};
  const std::array<std::array<double, 3>, 3> c2{
      {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}};
  report.witness_midpoint = Objective(midpoint(c1, c2), s, cfg).total;
  report.witness_average = 0.5 * (Objective(dense(c1), s, cfg).total +
                                   Objective(dense(c2), s, cfg).total);
  report.elapsed_s = Seconds(start);
  return report;
}

std::string FormatConvexityReport(const ConvexityReport& r) {
  std::string out;
  out += fmt::format("objective: f(mid) = {:.4f}, avg f = {:.4f} -> {}\n",
                     r.midpoint, r.average,
                     r.violated() ? "non-convex: confirmed"
                                  : "inequality holds on this pair");
  out += fmt::format(
      "laplacian-form variant: f(mid) = {:.4f}, avg f = {:.4f}\n",
      r.laplacian_midpoint, r.laplacian_average);
  out += fmt::format("3-cycle pair: f(mid) = {:.4f}, avg f = {:.4f} -> {}\n",
                     r.witness_midpoint, r.witness_average,
                     r.witness_violated() ? "non-convex: confirmed"
                                          : "inequality holds");
  return out;
}

}  // namespace feedbalance
