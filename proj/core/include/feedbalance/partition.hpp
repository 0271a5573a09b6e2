#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

struct BisectionResult {
  /// 0/1 label per node.
  std::vector<int> labels;
  double cut_weight = 0.0;
  int passes = 0;
};

/// Balanced two-way partition by the Kernighan–Lin pair-swap heuristic on
/// the max-symmetrized graph. Starts from a seeded random balanced split and
/// runs passes until one fails to improve the cut (or `max_passes`). Part
/// sizes differ by at most one.
BisectionResult KernighanLinBisect(const Graph& g, std::uint64_t seed,
                                   int max_passes = 50);

/// Total weight of symmetrized edges whose endpoints carry different labels.
double CutWeight(const Graph& g, std::span<const int> labels);

}  // namespace feedbalance
