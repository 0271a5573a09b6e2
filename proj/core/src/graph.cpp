#include "feedbalance/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

void CheckWeights(std::span<const double> weights) {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] < 0.0) {
      throw ValidationError("edge weight at index " + std::to_string(k) +
                            " is negative or non-finite");
    }
  }
}

}  // namespace

Graph::Graph()
    : pattern_(std::make_shared<const Pattern>(Pattern{{0}, {}})) {}

Graph::Graph(std::shared_ptr<const Pattern> pattern,
             std::vector<double> weights)
    : pattern_(std::move(pattern)), weights_(std::move(weights)) {}

Graph::Graph(std::vector<EdgeIndex> row_offsets,
             std::vector<NodeId> col_indices, std::vector<double> weights) {
  if (row_offsets.empty() || row_offsets.front() != 0) {
    throw ValidationError("row_offsets must start with 0");
  }
  const auto n = static_cast<NodeId>(row_offsets.size() - 1);
  if (static_cast<std::size_t>(row_offsets.back()) != col_indices.size() ||
      col_indices.size() != weights.size()) {
    throw ValidationError("CSR array sizes are inconsistent");
  }
  for (NodeId i = 0; i < n; ++i) {
    const EdgeIndex b = row_offsets[i];
    const EdgeIndex e = row_offsets[i + 1];
    if (e < b) throw ValidationError("row_offsets must be non-decreasing");
    for (EdgeIndex k = b; k < e; ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= n) {
        throw ValidationError("column index out of range in row " +
                              std::to_string(i));
      }
      if (k > b && col_indices[k] <= col_indices[k - 1]) {
        throw ValidationError("column indices of row " + std::to_string(i) +
                              " are not strictly increasing");
      }
    }
  }
  CheckWeights(weights);
  pattern_ = std::make_shared<const Pattern>(
      Pattern{std::move(row_offsets), std::move(col_indices)});
  weights_ = std::move(weights);
}

Graph Graph::FromEdges(NodeId n, std::vector<Edge> edges,
                       DuplicatePolicy duplicates) {
  if (n < 0) throw ValidationError("node count must be non-negative");
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw ValidationError("edge (" + std::to_string(e.src) + ", " +
                            std::to_string(e.dst) + ") outside node range");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw ValidationError("edge (" + std::to_string(e.src) + ", " +
                            std::to_string(e.dst) +
                            ") has a negative or non-finite weight");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  std::vector<EdgeIndex> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<NodeId> cols;
  std::vector<double> weights;
  cols.reserve(edges.size());
  weights.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (k > 0 && edges[k - 1].src == e.src && edges[k - 1].dst == e.dst) {
      switch (duplicates) {
        case DuplicatePolicy::kError:
          throw ValidationError("duplicate edge (" + std::to_string(e.src) +
                                ", " + std::to_string(e.dst) + ")");
        case DuplicatePolicy::kKeepMax:
          weights.back() = std::max(weights.back(), e.weight);
          break;
        case DuplicatePolicy::kSum:
          weights.back() += e.weight;
          break;
      }
      continue;
    }
    cols.push_back(e.dst);
    weights.push_back(e.weight);
    ++offsets[static_cast<std::size_t>(e.src) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return Graph(std::make_shared<const Pattern>(
                   Pattern{std::move(offsets), std::move(cols)}),
               std::move(weights));
}

NodeId Graph::num_nodes() const noexcept {
  return static_cast<NodeId>(pattern_->row_offsets.size() - 1);
}

EdgeIndex Graph::num_edges() const noexcept {
  return static_cast<EdgeIndex>(weights_.size());
}

std::span<const EdgeIndex> Graph::row_offsets() const noexcept {
  return pattern_->row_offsets;
}

std::span<const NodeId> Graph::col_indices() const noexcept {
  return pattern_->col_indices;
}

EdgeIndex Graph::row_begin(NodeId i) const noexcept {
  return pattern_->row_offsets[static_cast<std::size_t>(i)];
}

EdgeIndex Graph::row_end(NodeId i) const noexcept {
  return pattern_->row_offsets[static_cast<std::size_t>(i) + 1];
}

std::span<const NodeId> Graph::Neighbors(NodeId i) const noexcept {
  return col_indices().subspan(static_cast<std::size_t>(row_begin(i)),
                               static_cast<std::size_t>(out_count(i)));
}

std::span<const double> Graph::RowWeights(NodeId i) const noexcept {
  return weights().subspan(static_cast<std::size_t>(row_begin(i)),
                           static_cast<std::size_t>(out_count(i)));
}

std::optional<EdgeIndex> Graph::FindEdge(NodeId i, NodeId j) const {
  if (i < 0 || i >= num_nodes()) return std::nullopt;
  const auto nbrs = Neighbors(i);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
  if (it == nbrs.end() || *it != j) return std::nullopt;
  return row_begin(i) + (it - nbrs.begin());
}

double Graph::Weight(NodeId i, NodeId j) const {
  const auto k = FindEdge(i, j);
  return k ? weights_[static_cast<std::size_t>(*k)] : 0.0;
}

std::vector<NodeId> Graph::EdgeSources() const {
  std::vector<NodeId> src(weights_.size());
  for (NodeId i = 0; i < num_nodes(); ++i) {
    std::fill(src.begin() + row_begin(i), src.begin() + row_end(i), i);
  }
  return src;
}

std::vector<EdgeIndex> Graph::ReverseEdgeIndex() const {
  std::vector<EdgeIndex> rev(weights_.size(), -1);
  const auto cols = col_indices();
  for (NodeId i = 0; i < num_nodes(); ++i) {
    for (EdgeIndex k = row_begin(i); k < row_end(i); ++k) {
      if (const auto r = FindEdge(cols[k], i)) rev[k] = *r;
    }
  }
  return rev;
}

Graph Graph::WithWeights(std::vector<double> weights) const {
  if (weights.size() != weights_.size()) {
    throw ValidationError("weight vector has " +
                          std::to_string(weights.size()) + " entries, graph has " +
                          std::to_string(weights_.size()) + " edges");
  }
  CheckWeights(weights);
  return Graph(pattern_, std::move(weights));
}

Graph Graph::Transposed() const {
  const NodeId n = num_nodes();
  const auto cols = col_indices();
  std::vector<EdgeIndex> offsets(static_cast<std::size_t>(n) + 1, 0);
  for (const NodeId j : cols) ++offsets[static_cast<std::size_t>(j) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<NodeId> tcols(cols.size());
  std::vector<double> tw(cols.size());
  // Rows are visited in increasing order, so each transposed row comes out
  // sorted.
  for (NodeId i = 0; i < n; ++i) {
    for (EdgeIndex k = row_begin(i); k < row_end(i); ++k) {
      const EdgeIndex dst = cursor[static_cast<std::size_t>(cols[k])]++;
      tcols[dst] = i;
      tw[dst] = weights_[k];
    }
  }
  return Graph(std::make_shared<const Pattern>(
                   Pattern{std::move(offsets), std::move(tcols)}),
               std::move(tw));
}

Graph Graph::Compacted() const {
  const NodeId n = num_nodes();
  const auto cols = col_indices();
  std::vector<EdgeIndex> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<NodeId> ccols;
  std::vector<double> cw;
  for (NodeId i = 0; i < n; ++i) {
    for (EdgeIndex k = row_begin(i); k < row_end(i); ++k) {
      if (weights_[k] == 0.0) continue;
      ccols.push_back(cols[k]);
      cw.push_back(weights_[k]);
    }
    offsets[static_cast<std::size_t>(i) + 1] = static_cast<EdgeIndex>(cw.size());
  }
  return Graph(std::make_shared<const Pattern>(
                   Pattern{std::move(offsets), std::move(ccols)}),
               std::move(cw));
}

Graph Graph::SymmetrizedMax() const {
  std::vector<Edge> edges;
  edges.reserve(weights_.size() * 2);
  const auto cols = col_indices();
  for (NodeId i = 0; i < num_nodes(); ++i) {
    for (EdgeIndex k = row_begin(i); k < row_end(i); ++k) {
      if (cols[k] == i) continue;
      edges.push_back({i, cols[k], weights_[k]});
      edges.push_back({cols[k], i, weights_[k]});
    }
  }
  return FromEdges(num_nodes(), std::move(edges), DuplicatePolicy::kKeepMax);
}

bool Graph::SamePattern(const Graph& other) const noexcept {
  if (pattern_ == other.pattern_) return true;
  return pattern_->row_offsets == other.pattern_->row_offsets &&
         pattern_->col_indices == other.pattern_->col_indices;
}

bool Graph::HasSymmetricPattern() const {
  const auto rev = ReverseEdgeIndex();
  return std::all_of(rev.begin(), rev.end(),
                     [](EdgeIndex r) { return r >= 0; });
}

std::vector<Edge> Graph::ToEdges() const {
  std::vector<Edge> edges;
  edges.reserve(weights_.size());
  const auto cols = col_indices();
  for (NodeId i = 0; i < num_nodes(); ++i) {
    for (EdgeIndex k = row_begin(i); k < row_end(i); ++k) {
      edges.push_back({i, cols[k], weights_[k]});
    }
  }
  return edges;
}

DegreeVector Degrees(const Graph& g, Direction direction) {
  DegreeVector deg(static_cast<std::size_t>(g.num_nodes()), 0.0);
  const auto cols = g.col_indices();
  const auto w = g.weights();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      if (direction == Direction::kOut) {
        deg[i] += w[k];
      } else {
        deg[cols[k]] += w[k];
      }
    }
  }
  return deg;
}

RowNormalization RowNormalize(const Graph& g) {
  std::vector<double> w(g.weights().begin(), g.weights().end());
  std::vector<NodeId> empty;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const EdgeIndex b = g.row_begin(i);
    const EdgeIndex e = g.row_end(i);
    double sum = 0.0;
    for (EdgeIndex k = b; k < e; ++k) sum += w[k];
    if (sum == 0.0) {
      empty.push_back(i);
      continue;
    }
    if (std::abs(sum - 1.0) <= 1e-12) continue;
    for (EdgeIndex k = b; k < e; ++k) w[k] /= sum;
  }
  return {g.WithWeights(std::move(w)), std::move(empty)};
}

double MaxRowSumDeviation(const Graph& g) {
  double worst = 0.0;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.out_count(i) == 0) continue;
    const auto row = g.RowWeights(i);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double MaxColumnSumDeviation(const Graph& g) {
  const DegreeVector in = Degrees(g, Direction::kIn);
  double worst = 0.0;
  for (const double d : in) worst = std::max(worst, std::abs(d - 1.0));
  return worst;
}

}  // namespace feedbalance
