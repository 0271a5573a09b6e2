#pragma once

#include <string>

#include "feedbalance/graph.hpp"
#include "feedbalance/opinions.hpp"

namespace feedbalance {

enum class BaselineKind {
  /// Favor sources with opinions near zero: 1 / (|s| + ε).
  kNeutralView,
  /// Favor edges spanning opposite views: |s_i − s_j| + ε.
  kOppoView,
  /// Favor popular sources: weighted in-degree + ε.
  kPopularity,
};

/// Whose property sets the weight of edge (i, j), where i follows j.
enum class BaselineSubject { kFollowee, kFollower };

struct BaselineOptions {
  BaselineKind kind = BaselineKind::kNeutralView;
  double epsilon = 1e-6;
  BaselineSubject subject = BaselineSubject::kFollowee;
};

/// Re-weights every stored edge by the heuristic and ℓ1-normalizes each row.
/// The pattern is kept, so the result is row-stochastic on the same edges.
Graph ApplyBaseline(const Graph& g, const OpinionVector& s,
                    const BaselineOptions& options);

const char* BaselineName(BaselineKind kind);
BaselineKind ParseBaselineKind(const std::string& name);
BaselineSubject ParseBaselineSubject(const std::string& name);

}  // namespace feedbalance
