#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

/// Reads `src<TAB>dst[<TAB>weight]` lines; `#` lines and blank lines are
/// skipped, a missing weight means 1.0. The node count is max id + 1.
/// With `directed == false` every line is stored in both directions and
/// repeated pairs keep the larger weight.
Graph ParseEdgeList(std::istream& in, bool directed);
Graph LoadEdgeList(const std::filesystem::path& path, bool directed);

/// Writes one stored edge per line with 17 significant digits. Edges whose
/// weight is exactly zero are written too, so the pattern round-trips.
void WriteEdgeList(const Graph& g, std::ostream& out);
void SaveEdgeList(const Graph& g, const std::filesystem::path& path);

/// Partition labels, one per line in node order.
void WriteLabels(std::span<const int> labels, std::ostream& out);
void SaveLabels(std::span<const int> labels, const std::filesystem::path& path);
std::vector<int> LoadLabels(const std::filesystem::path& path);

}  // namespace feedbalance
