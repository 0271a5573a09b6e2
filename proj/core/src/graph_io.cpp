#include "feedbalance/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

template <typename T>
T ParseNumber(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("cannot parse " + std::string(what) + " '" +
                         std::string(text) + "'",
                     line_no);
  }
  return value;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

Graph ParseEdgeList(std::istream& in, bool directed) {
  std::vector<Edge> edges;
  long long max_id = -1;
  long long declared_nodes = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    if (fields.front().front() == '#') {
      // "# nodes N" written by SaveEdgeList preserves isolated trailing ids.
      if (fields.size() == 3 && fields[0] == "#" && fields[1] == "nodes") {
        declared_nodes = ParseNumber<long long>(fields[2], line_no, "node count");
      }
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected 'src<TAB>dst[<TAB>weight]', got " +
                           std::to_string(fields.size()) + " fields",
                       line_no);
    }
    const auto src = ParseNumber<long long>(fields[0], line_no, "source id");
    const auto dst = ParseNumber<long long>(fields[1], line_no, "target id");
    if (src < 0 || dst < 0) {
      throw ParseError("node ids must be non-negative", line_no);
    }
    if (src > std::numeric_limits<NodeId>::max() - 1 ||
        dst > std::numeric_limits<NodeId>::max() - 1) {
      throw ParseError("node id too large", line_no);
    }
    double weight = 1.0;
    if (fields.size() == 3) {
      weight = ParseNumber<double>(fields[2], line_no, "weight");
      if (!std::isfinite(weight) || weight < 0.0) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": weight must be finite and non-negative");
      }
    }
    max_id = std::max({max_id, src, dst});
    edges.push_back(
        {static_cast<NodeId>(src), static_cast<NodeId>(dst), weight});
    if (!directed && src != dst) {
      edges.push_back(
          {static_cast<NodeId>(dst), static_cast<NodeId>(src), weight});
    }
  }
  const long long n = std::max(declared_nodes, max_id + 1);
  return Graph::FromEdges(static_cast<NodeId>(n), std::move(edges),
                          directed ? DuplicatePolicy::kError
                                   : DuplicatePolicy::kKeepMax);
}

Graph LoadEdgeList(const std::filesystem::path& path, bool directed) {
  auto in = OpenForRead(path);
  return ParseEdgeList(in, directed);
}

void WriteEdgeList(const Graph& g, std::ostream& out) {
  const auto cols = g.col_indices();
  const auto w = g.weights();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      out << i << '\t' << cols[k] << '\t' << FormatDouble(w[k]) << '\n';
    }
  }
}

void SaveEdgeList(const Graph& g, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  // Keep the node count recoverable when trailing nodes have no edges.
  out << "# nodes " << g.num_nodes() << '\n';
  WriteEdgeList(g, out);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

void WriteLabels(std::span<const int> labels, std::ostream& out) {
  for (const int label : labels) out << label << '\n';
}

void SaveLabels(std::span<const int> labels,
                const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteLabels(labels, out);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<int> LoadLabels(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    labels.push_back(ParseNumber<int>(fields.back(), line_no, "label"));
  }
  return labels;
}

}  // namespace feedbalance
