#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

/// Which operator a solve or product uses: A or Aᵀ.
enum class Orientation { kForward, kTranspose };

enum class Preconditioner { kNone, kJacobi };

struct SolverConfig {
  double rel_tolerance = 1e-10;
  /// 0 selects 10 * n.
  std::int64_t max_iterations = 0;
  Preconditioner preconditioner = Preconditioner::kNone;
  /// Seeds the shadow residual drawn after a breakdown.
  std::uint64_t seed = 0x5eedULL;
};

struct SolveResult {
  std::vector<double> solution;
  /// BiCGStab iterations (two operator products each).
  std::int64_t iterations = 0;
  /// ‖b − (2I − A°)x‖₂ / ‖b‖₂, recomputed from the returned solution.
  double final_residual = 0.0;
  int breakdown_restarts = 0;
};

/// out = 2v − A°v, computed matrix-free in O(n + m).
void ApplyShifted(const Graph& g, Orientation orientation,
                  std::span<const double> v, std::span<double> out);
std::vector<double> ApplyShifted(const Graph& g, Orientation orientation,
                                 std::span<const double> v);

/// Solves (2I − A°)x = b with BiCGStab from a zero initial guess. Intended
/// for row-stochastic A, where the operator is strictly diagonally dominant.
/// b = 0 returns x = 0 after zero iterations.
///
/// A breakdown (ρ or ω numerically zero) restarts once from the current
/// iterate with a random shadow residual; a second breakdown or running out
/// of iterations throws ConvergenceError carrying the best residual seen.
SolveResult SolveShifted(const Graph& g, Orientation orientation,
                         std::span<const double> b,
                         const SolverConfig& cfg = {});

}  // namespace feedbalance
