#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

enum class GraphModel { kErdosRenyi, kBarabasiAlbert, kSbm };

struct GeneratorConfig {
  GraphModel model = GraphModel::kErdosRenyi;
  NodeId n = 0;
  /// Erdős–Rényi: probability of each ordered pair (i, j), i != j.
  double edge_probability = 0.01;
  /// Barabási–Albert: edges attached by each arriving node.
  int attachment = 2;
  /// Barabási–Albert: store each attachment in both directions. When false
  /// only the arriving node follows its targets.
  bool symmetric = true;
  /// SBM: block sizes (must sum to n). Empty means two equal halves.
  std::vector<NodeId> block_sizes;
  double intra_probability = 0.02;
  /// Probability of an edge between different blocks.
  double inter_probability = 0.002;
  std::uint64_t seed = 1;
};

/// Throws ValidationError on out-of-range parameters.
void Validate(const GeneratorConfig& cfg);

/// Samples a graph, gives every empty row one uniformly random out-edge
/// (inside the node's own block for SBM), then row-normalizes. Deterministic
/// for a fixed seed.
Graph Generate(const GeneratorConfig& cfg);

/// Block label of every node for an SBM config (0, 1, ...).
std::vector<int> SbmBlockLabels(const GeneratorConfig& cfg);

const char* ModelName(GraphModel model);
GraphModel ParseModel(const std::string& name);

}  // namespace feedbalance
