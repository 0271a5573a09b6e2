#include "feedbalance/baselines.hpp"

#include <cmath>
#include <vector>

#include "feedbalance/errors.hpp"
#include "feedbalance/projection.hpp"

namespace feedbalance {

Graph ApplyBaseline(const Graph& g, const OpinionVector& s,
                    const BaselineOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw ValidationError("baseline epsilon must be positive");
  }
  if (s.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError("opinion vector does not match the graph size");
  }
  const bool followee = options.subject == BaselineSubject::kFollowee;
  const double eps = options.epsilon;
  const auto cols = g.col_indices();
  DegreeVector in_degree;
  if (options.kind == BaselineKind::kPopularity) {
    in_degree = Degrees(g, Direction::kIn);
  }

  std::vector<double> raw(static_cast<std::size_t>(g.num_edges()));
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      const NodeId j = cols[k];
      const NodeId subject = followee ? j : i;
      switch (options.kind) {
        case BaselineKind::kNeutralView:
          raw[k] = 1.0 / (std::abs(s.values[subject]) + eps);
          break;
        case BaselineKind::kOppoView:
          raw[k] = std::abs(s.values[i] - s.values[j]) + eps;
          break;
        case BaselineKind::kPopularity:
          raw[k] = in_degree[subject] + eps;
          break;
      }
    }
  }
  return ProjectRowStochastic(g, raw);
}

const char* BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kNeutralView:
      return "neutral_view";
    case BaselineKind::kOppoView:
      return "oppo_view";
    case BaselineKind::kPopularity:
      return "pop";
  }
  return "unknown";
}

BaselineKind ParseBaselineKind(const std::string& name) {
  if (name == "neutral_view" || name == "neutral") {
    return BaselineKind::kNeutralView;
  }
  if (name == "oppo_view" || name == "oppo") return BaselineKind::kOppoView;
  if (name == "pop" || name == "popularity") return BaselineKind::kPopularity;
  throw ValidationError("unknown baseline '" + name + "'");
}

BaselineSubject ParseBaselineSubject(const std::string& name) {
  if (name == "followee") return BaselineSubject::kFollowee;
  if (name == "follower") return BaselineSubject::kFollower;
  throw ValidationError("baseline subject must be follower or followee, got '" +
                        name + "'");
}

}  // namespace feedbalance
