#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "feedbalance/graph.hpp"
#include "feedbalance/linsolve.hpp"
#include "feedbalance/opinions.hpp"

namespace feedbalance {

struct Equilibrium {
  OpinionVector z_star;
  std::int64_t iterations = 0;
  double final_residual = 0.0;
  int breakdown_restarts = 0;
};

/// Value of P + D at the FJ equilibrium, split into its parts.
///
/// `polarization` is z*ᵀz* and `disagreement` the edge-sum index at z*, so
/// `total == polarization + disagreement` whenever every row has out-edges.
/// `polarization_centered` subtracts the mean of z* first; the two agree when
/// z* is mean-zero (for instance when A is doubly stochastic).
struct ObjectiveValue {
  double total = 0.0;
  double polarization = 0.0;
  double disagreement = 0.0;
  double polarization_centered = 0.0;
  /// Solver iterations for z1, z2, z3.
  std::array<std::int64_t, 3> solver_iterations{};
};

/// The three auxiliary solves shared by objective and gradient:
/// z1 = (2I − Aᵀ)⁻¹s, z2 = (2I − A)⁻¹s, z3 = (2I − Aᵀ)⁻¹((D_in − I)/2 · z2),
/// and f = sᵀz1 + sᵀz3.
struct ObjectiveTerms {
  std::vector<double> z1;
  std::vector<double> z2;
  std::vector<double> z3;
  double value = 0.0;
  std::array<std::int64_t, 3> iterations{};
};

/// Runs the z1 and z2 solves on two threads when `parallel` is set; the
/// result is bit-identical to the sequential path.
ObjectiveTerms SolveObjectiveTerms(const Graph& g, std::span<const double> s,
                                   const SolverConfig& cfg = {},
                                   bool parallel = false);

/// One synchronous FJ update z' = (D_out + I)⁻¹(Az + s). Rows of a
/// row-stochastic A give (Az + s)/2; empty rows give s_i.
OpinionVector FjStep(const Graph& g, const OpinionVector& z,
                     const OpinionVector& s);

/// Fixed point of FjStep, solved directly. Nonempty rows must sum to one
/// within 1e-8. Empty rows hold their innate opinion.
Equilibrium FjEquilibrium(const Graph& g, const OpinionVector& s,
                          const SolverConfig& cfg = {});

/// Σ (z_i − mean(z))².
double Polarization(std::span<const double> z);

/// ½ Σ_(i,j)∈E a_ij (z_i − z_j)².
double Disagreement(const Graph& g, std::span<const double> z);

/// ½ zᵀ(I + D_in − 2A)z. Equals Disagreement when every row sums to one.
double DisagreementQuadraticForm(const Graph& g, std::span<const double> z);

/// zᵀ(D_out − A)z, the undirected Laplacian form applied to A as given.
double LaplacianQuadraticForm(const Graph& g, std::span<const double> z);

/// P + D at equilibrium via three solves.
ObjectiveValue Objective(const Graph& g, const OpinionVector& s,
                         const SolverConfig& cfg = {});

/// Throws ValidationError unless every nonempty row sums to one within tol.
void RequireRowStochastic(const Graph& g, double tol = 1e-8);

}  // namespace feedbalance
