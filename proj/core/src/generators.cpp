#include "feedbalance/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

using Rng = std::mt19937_64;

std::vector<NodeId> ResolvedBlocks(const GeneratorConfig& cfg) {
  if (!cfg.block_sizes.empty()) return cfg.block_sizes;
  return {cfg.n / 2, cfg.n - cfg.n / 2};
}

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1]");
  }
}

// Appends edges for every ordered pair (row_first + r, col_first + c),
// r < rows, c < cols, independently with probability p. Diagonal pairs are
// excluded when the two ranges coincide. Geometric skipping keeps this
// O(rows + expected edges) instead of O(rows * cols).
void SampleBlock(NodeId row_first, NodeId rows, NodeId col_first, NodeId cols,
                 double p, bool same_range, Rng& rng, std::vector<Edge>& out) {
  if (p <= 0.0 || rows == 0) return;
  const std::int64_t per_row = same_range ? cols - 1 : cols;
  if (per_row <= 0) return;
  const std::int64_t total = static_cast<std::int64_t>(rows) * per_row;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::int64_t idx = -1;
  while (true) {
    if (p >= 1.0) {
      ++idx;
    } else {
      const double u = unif(rng);
      const double skip = std::floor(std::log1p(-u) / log_q);
      if (skip >= static_cast<double>(total)) break;
      idx += 1 + static_cast<std::int64_t>(skip);
    }
    if (idx >= total) break;
    const auto r = static_cast<NodeId>(idx / per_row);
    auto c = static_cast<NodeId>(idx % per_row);
    if (same_range && c >= r) ++c;
    out.push_back({row_first + r, col_first + c, 1.0});
  }
}

std::vector<Edge> SampleErdosRenyi(const GeneratorConfig& cfg, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(
      cfg.edge_probability * static_cast<double>(cfg.n) * (cfg.n - 1) * 1.05 +
      16));
  SampleBlock(0, cfg.n, 0, cfg.n, cfg.edge_probability, true, rng, edges);
  return edges;
}

std::vector<Edge> SampleSbm(const GeneratorConfig& cfg, Rng& rng) {
  const auto blocks = ResolvedBlocks(cfg);
  std::vector<NodeId> first(blocks.size(), 0);
  std::partial_sum(blocks.begin(), blocks.end() - 1, first.begin() + 1);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const double p = a == b ? cfg.intra_probability : cfg.inter_probability;
      SampleBlock(first[a], blocks[a], first[b], blocks[b], p, a == b, rng,
                  edges);
    }
  }
  return edges;
}

std::vector<Edge> SampleBarabasiAlbert(const GeneratorConfig& cfg, Rng& rng) {
  const int k = cfg.attachment;
  std::vector<Edge> edges;
  // Every endpoint occurrence, so uniform draws are degree-proportional.
  std::vector<NodeId> endpoints;
  const NodeId seed_nodes = static_cast<NodeId>(k + 1);
  for (NodeId i = 0; i < seed_nodes; ++i) {
    for (NodeId j = i + 1; j < seed_nodes; ++j) {
      edges.push_back({i, j, 1.0});
      edges.push_back({j, i, 1.0});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<NodeId> targets;
  for (NodeId v = seed_nodes; v < cfg.n; ++v) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(targets.size()) < k) {
      const NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (const NodeId t : targets) {
      edges.push_back({v, t, 1.0});
      if (cfg.symmetric) edges.push_back({t, v, 1.0});
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return edges;
}

}  // namespace

void Validate(const GeneratorConfig& cfg) {
  if (cfg.n < 2) throw ValidationError("generator needs n >= 2");
  switch (cfg.model) {
    case GraphModel::kErdosRenyi:
      CheckProbability(cfg.edge_probability, "edge probability");
      break;
    case GraphModel::kBarabasiAlbert:
      if (cfg.attachment < 1 || cfg.attachment >= cfg.n) {
        throw ValidationError("attachment count must lie in [1, n)");
      }
      break;
    case GraphModel::kSbm: {
      CheckProbability(cfg.intra_probability, "intra-block probability");
      CheckProbability(cfg.inter_probability, "inter-block probability");
      const auto blocks = ResolvedBlocks(cfg);
      std::int64_t total = 0;
      for (const NodeId b : blocks) {
        if (b <= 0) throw ValidationError("block sizes must be positive");
        total += b;
      }
      if (total != cfg.n) {
        throw ValidationError("block sizes sum to " + std::to_string(total) +
                              ", expected n = " + std::to_string(cfg.n));
      }
      break;
    }
  }
}

std::vector<int> SbmBlockLabels(const GeneratorConfig& cfg) {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(cfg.n));
  const auto blocks = ResolvedBlocks(cfg);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    labels.insert(labels.end(), static_cast<std::size_t>(blocks[b]),
                  static_cast<int>(b));
  }
  return labels;
}

Graph Generate(const GeneratorConfig& cfg) {
  Validate(cfg);
  Rng rng(cfg.seed);
  std::vector<Edge> edges;
  switch (cfg.model) {
    case GraphModel::kErdosRenyi:
      edges = SampleErdosRenyi(cfg, rng);
      break;
    case GraphModel::kBarabasiAlbert:
      edges = SampleBarabasiAlbert(cfg, rng);
      break;
    case GraphModel::kSbm:
      edges = SampleSbm(cfg, rng);
      break;
  }

  std::vector<char> has_out(static_cast<std::size_t>(cfg.n), 0);
  for (const Edge& e : edges) has_out[e.src] = 1;

  // Repair range per node: the whole graph, or the node's SBM block.
  std::vector<NodeId> range_first(static_cast<std::size_t>(cfg.n), 0);
  std::vector<NodeId> range_size(static_cast<std::size_t>(cfg.n), cfg.n);
  if (cfg.model == GraphModel::kSbm) {
    NodeId first = 0;
    for (const NodeId b : ResolvedBlocks(cfg)) {
      if (b >= 2) {
        for (NodeId v = first; v < first + b; ++v) {
          range_first[v] = first;
          range_size[v] = b;
        }
      }
      first += b;
    }
  }
  for (NodeId v = 0; v < cfg.n; ++v) {
    if (has_out[v]) continue;
    std::uniform_int_distribution<NodeId> pick(0, range_size[v] - 2);
    NodeId t = range_first[v] + pick(rng);
    if (t >= v) ++t;
    edges.push_back({v, t, 1.0});
  }

  return RowNormalize(Graph::FromEdges(cfg.n, std::move(edges),
                                       DuplicatePolicy::kError))
      .graph;
}

const char* ModelName(GraphModel model) {
  switch (model) {
    case GraphModel::kErdosRenyi:
      return "erdos_renyi";
    case GraphModel::kBarabasiAlbert:
      return "barabasi_albert";
    case GraphModel::kSbm:
      return "sbm";
  }
  return "unknown";
}

GraphModel ParseModel(const std::string& name) {
  if (name == "erdos_renyi" || name == "er") return GraphModel::kErdosRenyi;
  if (name == "barabasi_albert" || name == "ba") {
    return GraphModel::kBarabasiAlbert;
  }
  if (name == "sbm") return GraphModel::kSbm;
  throw ValidationError("unknown graph model '" + name + "'");
}

}  // namespace feedbalance
