#include "feedbalance/dynamics.hpp"

#include <cmath>
#include <future>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

void CheckLength(const Graph& g, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError(std::string(what) + " has length " +
                          std::to_string(size) + ", graph has " +
                          std::to_string(g.num_nodes()) + " nodes");
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

void RequireRowStochastic(const Graph& g, double tol) {
  const auto w = g.weights();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.out_count(i) == 0) continue;
    double sum = 0.0;
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) sum += w[k];
    if (std::abs(sum - 1.0) > tol) {
      throw ValidationError("row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) +
                            "; a row-stochastic matrix is required");
    }
  }
}

ObjectiveTerms SolveObjectiveTerms(const Graph& g, std::span<const double> s,
                                   const SolverConfig& cfg, bool parallel) {
  CheckLength(g, s.size(), "opinion vector");
  ObjectiveTerms terms;
  SolveResult r1;
  SolveResult r2;
  if (parallel) {
    auto first = std::async(std::launch::async, [&] {
      return SolveShifted(g, Orientation::kTranspose, s, cfg);
    });
    r2 = SolveShifted(g, Orientation::kForward, s, cfg);
    r1 = first.get();
  } else {
    r1 = SolveShifted(g, Orientation::kTranspose, s, cfg);
    r2 = SolveShifted(g, Orientation::kForward, s, cfg);
  }

  const DegreeVector d_in = Degrees(g, Direction::kIn);
  std::vector<double> rhs(s.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    rhs[i] = 0.5 * (d_in[i] - 1.0) * r2.solution[i];
  }
  SolveResult r3 = SolveShifted(g, Orientation::kTranspose, rhs, cfg);

  terms.value = Dot(s, r1.solution) + Dot(s, r3.solution);
  terms.iterations = {r1.iterations, r2.iterations, r3.iterations};
  terms.z1 = std::move(r1.solution);
  terms.z2 = std::move(r2.solution);
  terms.z3 = std::move(r3.solution);
  return terms;
}

OpinionVector FjStep(const Graph& g, const OpinionVector& z,
                     const OpinionVector& s) {
  CheckLength(g, z.size(), "expressed opinions");
  CheckLength(g, s.size(), "innate opinions");
  const auto cols = g.col_indices();
  const auto w = g.weights();
  std::vector<double> next(z.size());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    double acc = 0.0;
    double d_out = 0.0;
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      acc += w[k] * z.values[cols[k]];
      d_out += w[k];
    }
    next[i] = (acc + s.values[i]) / (d_out + 1.0);
  }
  return OpinionVector(std::move(next));
}

Equilibrium FjEquilibrium(const Graph& g, const OpinionVector& s,
                          const SolverConfig& cfg) {
  CheckLength(g, s.size(), "innate opinions");
  RequireRowStochastic(g);
  if (s.size() > 0 && std::abs(Mean(s.values)) > 1e-9) {
    spdlog::warn("innate opinions are not mean-centered (mean {:.3g})",
                 Mean(s.values));
  }
  // An empty row reads 2 z_i = rhs_i, so doubling rhs_i pins z_i = s_i.
  std::vector<double> rhs = s.values;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.out_count(i) == 0) rhs[i] *= 2.0;
  }
  SolveResult r = SolveShifted(g, Orientation::kForward, rhs, cfg);
  Equilibrium eq;
  eq.z_star = OpinionVector(std::move(r.solution));
  eq.iterations = r.iterations;
  eq.final_residual = r.final_residual;
  eq.breakdown_restarts = r.breakdown_restarts;
  return eq;
}

double Polarization(std::span<const double> z) {
  if (z.empty()) return 0.0;
  const double mean = Mean(z);
  double acc = 0.0;
  for (const double v : z) acc += (v - mean) * (v - mean);
  return acc;
}

double Disagreement(const Graph& g, std::span<const double> z) {
  CheckLength(g, z.size(), "opinion vector");
  const auto cols = g.col_indices();
  const auto w = g.weights();
  double acc = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      const double gap = z[i] - z[cols[k]];
      acc += w[k] * gap * gap;
    }
  }
  return 0.5 * acc;
}

double DisagreementQuadraticForm(const Graph& g, std::span<const double> z) {
  CheckLength(g, z.size(), "opinion vector");
  const DegreeVector d_in = Degrees(g, Direction::kIn);
  const auto cols = g.col_indices();
  const auto w = g.weights();
  double diag = 0.0;
  double cross = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    diag += (1.0 + d_in[i]) * z[i] * z[i];
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      cross += w[k] * z[i] * z[cols[k]];
    }
  }
  return 0.5 * (diag - 2.0 * cross);
}

double LaplacianQuadraticForm(const Graph& g, std::span<const double> z) {
  CheckLength(g, z.size(), "opinion vector");
  const auto cols = g.col_indices();
  const auto w = g.weights();
  double acc = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      acc += w[k] * z[i] * (z[i] - z[cols[k]]);
    }
  }
  return acc;
}

ObjectiveValue Objective(const Graph& g, const OpinionVector& s,
                         const SolverConfig& cfg) {
  RequireRowStochastic(g);
  const ObjectiveTerms terms = SolveObjectiveTerms(g, s.values, cfg);
  ObjectiveValue out;
  out.total = terms.value;
  out.polarization = Dot(terms.z2, terms.z2);
  out.disagreement = Disagreement(g, terms.z2);
  out.polarization_centered = Polarization(terms.z2);
  out.solver_iterations = terms.iterations;
  return out;
}

}  // namespace feedbalance
