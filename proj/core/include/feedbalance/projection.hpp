#pragma once

#include <span>

#include "feedbalance/graph.hpp"

namespace feedbalance {

/// Euclidean-style projection onto row-stochastic matrices with the pattern
/// of `pattern`: negative entries are clipped to zero, then each row is
/// divided by its ℓ1 norm. A row left with no positive entry becomes uniform
/// over its stored edges. `candidate` is aligned with the stored edges; the
/// result keeps the pattern (entries may become exactly zero).
Graph ProjectRowStochastic(const Graph& pattern,
                           std::span<const double> candidate);

struct SinkhornOptions {
  /// Stop once every row and column sum is within tol of one.
  double tolerance = 1e-8;
  int max_sweeps = 1000;
};

struct SinkhornResult {
  Graph graph;
  int sweeps = 0;
  double max_deviation = 0.0;
};

/// Alternating row and column normalization (Sinkhorn–Knopp) of the clipped
/// candidate on the stored pattern. Rows or columns that clip to all zeros
/// are reset to ones before scaling. Throws ConvergenceError after
/// `max_sweeps`, which usually means the pattern lacks total support.
SinkhornResult ProjectDoublyStochastic(const Graph& pattern,
                                       std::span<const double> candidate,
                                       const SinkhornOptions& options = {});

}  // namespace feedbalance
