#include "feedbalance/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

std::vector<double> Clipped(const Graph& pattern,
                            std::span<const double> candidate) {
  if (candidate.size() != static_cast<std::size_t>(pattern.num_edges())) {
    throw ValidationError("candidate has " + std::to_string(candidate.size()) +
                          " values for " + std::to_string(pattern.num_edges()) +
                          " stored edges");
  }
  std::vector<double> w(candidate.begin(), candidate.end());
  for (double& v : w) {
    if (!std::isfinite(v)) {
      throw ValidationError("projection candidate has non-finite entries");
    }
    v = std::max(v, 0.0);
  }
  return w;
}

}  // namespace

Graph ProjectRowStochastic(const Graph& pattern,
                           std::span<const double> candidate) {
  std::vector<double> w = Clipped(pattern, candidate);
  for (NodeId i = 0; i < pattern.num_nodes(); ++i) {
    const EdgeIndex begin = pattern.row_begin(i);
    const EdgeIndex end = pattern.row_end(i);
    if (begin == end) continue;
    double sum = 0.0;
    for (EdgeIndex k = begin; k < end; ++k) sum += w[k];
    if (sum > 0.0) {
      for (EdgeIndex k = begin; k < end; ++k) w[k] /= sum;
    } else {
      const double uniform = 1.0 / static_cast<double>(end - begin);
      for (EdgeIndex k = begin; k < end; ++k) w[k] = uniform;
    }
  }
  return pattern.WithWeights(std::move(w));
}

SinkhornResult ProjectDoublyStochastic(const Graph& pattern,
                                       std::span<const double> candidate,
                                       const SinkhornOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_sweeps < 1) {
    throw ValidationError("Sinkhorn needs tolerance > 0 and max_sweeps >= 1");
  }
  std::vector<double> w = Clipped(pattern, candidate);
  const NodeId n = pattern.num_nodes();
  const auto cols = pattern.col_indices();

  std::vector<double> col_sum(static_cast<std::size_t>(n), 0.0);
  for (NodeId i = 0; i < n; ++i) {
    if (pattern.out_count(i) == 0) {
      throw ValidationError("node " + std::to_string(i) +
                            " has no edges; no doubly stochastic matrix fits");
    }
    double row = 0.0;
    for (EdgeIndex k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      row += w[k];
    }
    if (row == 0.0) {
      for (EdgeIndex k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
        w[k] = 1.0;
      }
    }
  }
  std::vector<char> has_in(static_cast<std::size_t>(n), 0);
  for (EdgeIndex k = 0; k < pattern.num_edges(); ++k) {
    col_sum[cols[k]] += w[k];
    has_in[cols[k]] = 1;
  }
  for (NodeId j = 0; j < n; ++j) {
    if (!has_in[j]) {
      throw ValidationError("node " + std::to_string(j) +
                            " has no incoming edges; no doubly stochastic "
                            "matrix fits");
    }
  }
  for (EdgeIndex k = 0; k < pattern.num_edges(); ++k) {
    if (col_sum[cols[k]] == 0.0) w[k] = 1.0;
  }

  double deviation = 0.0;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    for (NodeId i = 0; i < n; ++i) {
      double row = 0.0;
      for (EdgeIndex k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
        row += w[k];
      }
      for (EdgeIndex k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
        w[k] /= row;
      }
    }
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    for (EdgeIndex k = 0; k < pattern.num_edges(); ++k) {
      col_sum[cols[k]] += w[k];
    }
    for (EdgeIndex k = 0; k < pattern.num_edges(); ++k) w[k] /= col_sum[cols[k]];

    // Columns are exact now up to rounding; rows carry the residual error.
    deviation = 0.0;
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    for (NodeId i = 0; i < n; ++i) {
      double row = 0.0;
      for (EdgeIndex k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
        row += w[k];
        col_sum[cols[k]] += w[k];
      }
      deviation = std::max(deviation, std::abs(row - 1.0));
    }
    for (const double c : col_sum) {
      deviation = std::max(deviation, std::abs(c - 1.0));
    }
    if (deviation <= options.tolerance) {
      return {pattern.WithWeights(std::move(w)), sweep, deviation};
    }
  }
  throw ConvergenceError(
      "Sinkhorn scaling did not converge in " +
          std::to_string(options.max_sweeps) +
          " sweeps; the pattern probably lacks total support",
      deviation, options.max_sweeps);
}

}  // namespace feedbalance
