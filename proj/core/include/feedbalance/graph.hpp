#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace feedbalance {

using NodeId = std::int32_t;
using EdgeIndex = std::int64_t;

/// A directed weighted edge (i follows j, weight a_ij).
struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

enum class Direction { kIn, kOut };

/// How `Graph::FromEdges` treats repeated (src, dst) pairs.
enum class DuplicatePolicy { kError, kKeepMax, kSum };

/// Weighted in- or out-degree per node.
using DegreeVector = std::vector<double>;

/// Immutable directed weighted graph in canonical CSR form: rows are
/// sources, column indices within a row are strictly increasing, weights
/// are non-negative.
///
/// The sparsity pattern is shared between graphs derived through
/// `WithWeights`, so re-weighting costs O(m) for the weights only.
class Graph {
 public:
  /// Empty graph with zero nodes.
  Graph();

  /// Builds from raw CSR arrays; validates canonical form.
  Graph(std::vector<EdgeIndex> row_offsets, std::vector<NodeId> col_indices,
        std::vector<double> weights);

  /// Builds from an unordered edge list over node ids 0..n-1.
  static Graph FromEdges(NodeId n, std::vector<Edge> edges,
                         DuplicatePolicy duplicates = DuplicatePolicy::kError);

  NodeId num_nodes() const noexcept;
  EdgeIndex num_edges() const noexcept;

  std::span<const EdgeIndex> row_offsets() const noexcept;
  std::span<const NodeId> col_indices() const noexcept;
  std::span<const double> weights() const noexcept { return weights_; }

  EdgeIndex row_begin(NodeId i) const noexcept;
  EdgeIndex row_end(NodeId i) const noexcept;
  EdgeIndex out_count(NodeId i) const noexcept {
    return row_end(i) - row_begin(i);
  }

  std::span<const NodeId> Neighbors(NodeId i) const noexcept;
  std::span<const double> RowWeights(NodeId i) const noexcept;

  /// Stored-edge index of (i, j), if present.
  std::optional<EdgeIndex> FindEdge(NodeId i, NodeId j) const;

  /// Weight of (i, j); 0 for absent edges.
  double Weight(NodeId i, NodeId j) const;

  /// Source node of each stored edge, aligned with `col_indices()`.
  std::vector<NodeId> EdgeSources() const;

  /// For every stored edge (i, j), the index of (j, i) or -1 when absent.
  std::vector<EdgeIndex> ReverseEdgeIndex() const;

  /// Same pattern, new weights (validated non-negative and finite).
  Graph WithWeights(std::vector<double> weights) const;

  /// Aᵀ with canonical ordering.
  Graph Transposed() const;

  /// Drops stored edges whose weight is exactly zero.
  Graph Compacted() const;

  /// Undirected view: w_ij = max(a_ij, a_ji), stored in both directions.
  Graph SymmetrizedMax() const;

  bool SamePattern(const Graph& other) const noexcept;

  /// True when every stored (i, j) has a stored (j, i).
  bool HasSymmetricPattern() const;

  std::vector<Edge> ToEdges() const;

 private:
  struct Pattern {
    std::vector<EdgeIndex> row_offsets;
    std::vector<NodeId> col_indices;
  };

  Graph(std::shared_ptr<const Pattern> pattern, std::vector<double> weights);

  std::shared_ptr<const Pattern> pattern_;
  std::vector<double> weights_;
};

DegreeVector Degrees(const Graph& g, Direction direction);

struct RowNormalization {
  Graph graph;
  /// Rows with no stored edge (or all-zero weights); left untouched.
  std::vector<NodeId> empty_rows;
};

/// Scales each non-empty row to sum to one. Rows already summing to one
/// within 1e-12 are copied bit-for-bit, which makes the operation idempotent.
RowNormalization RowNormalize(const Graph& g);

/// Largest |row sum - 1| over rows with at least one stored edge.
double MaxRowSumDeviation(const Graph& g);

/// Largest |column sum - 1| over all columns.
double MaxColumnSumDeviation(const Graph& g);

}  // namespace feedbalance
