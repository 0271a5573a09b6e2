#include "feedbalance/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

// Weight between u and v in the symmetrized graph (0 when absent).
double PairWeight(const Graph& sym, NodeId u, NodeId v) {
  return sym.Weight(u, v);
}

// One KL pass: tentatively swaps every node once, then commits the prefix of
// swaps with the largest positive cumulative gain. Returns that gain.
double KernighanLinPass(const Graph& sym, std::vector<int>& side) {
  const NodeId n = sym.num_nodes();
  const auto cols = sym.col_indices();
  const auto w = sym.weights();

  // D[v] = external - internal connection weight.
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  for (NodeId v = 0; v < n; ++v) {
    for (EdgeIndex k = sym.row_begin(v); k < sym.row_end(v); ++k) {
      d[v] += side[cols[k]] != side[v] ? w[k] : -w[k];
    }
  }

  std::vector<char> locked(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<NodeId, NodeId>> swaps;
  std::vector<double> gains;
  std::vector<NodeId> part_a;
  std::vector<NodeId> part_b;
  const auto by_gain = [&d](NodeId x, NodeId y) {
    return d[x] != d[y] ? d[x] > d[y] : x < y;
  };

  while (true) {
    part_a.clear();
    part_b.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (locked[v]) continue;
      (side[v] == 0 ? part_a : part_b).push_back(v);
    }
    if (part_a.empty() || part_b.empty()) break;
    std::sort(part_a.begin(), part_a.end(), by_gain);
    std::sort(part_b.begin(), part_b.end(), by_gain);

    // gain(a, b) = D[a] + D[b] - 2 w_ab <= D[a] + D[b], so both sorted scans
    // stop once that upper bound cannot beat the best pair found so far.
    double best = -std::numeric_limits<double>::infinity();
    NodeId best_a = -1;
    NodeId best_b = -1;
    for (const NodeId a : part_a) {
      if (d[a] + d[part_b.front()] <= best) break;
      for (const NodeId b : part_b) {
        if (d[a] + d[b] <= best) break;
        const double gain = d[a] + d[b] - 2.0 * PairWeight(sym, a, b);
        if (gain > best) {
          best = gain;
          best_a = a;
          best_b = b;
        }
      }
    }

    swaps.emplace_back(best_a, best_b);
    gains.push_back(best);
    locked[best_a] = locked[best_b] = 1;
    // Update D for unlocked neighbours as if the pair had been swapped.
    for (const NodeId moved : {best_a, best_b}) {
      for (EdgeIndex k = sym.row_begin(moved); k < sym.row_end(moved); ++k) {
        const NodeId u = cols[k];
        if (locked[u]) continue;
        // Before the swap, `moved` was on side[moved]; afterwards opposite.
        d[u] += side[u] == side[moved] ? 2.0 * w[k] : -2.0 * w[k];
      }
    }
    std::swap(side[best_a], side[best_b]);
  }

  // Best prefix; undo the tail.
  double running = 0.0;
  double best_total = 0.0;
  std::size_t best_len = 0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    running += gains[k];
    if (running > best_total + 1e-12) {
      best_total = running;
      best_len = k + 1;
    }
  }
  for (std::size_t k = swaps.size(); k > best_len; --k) {
    std::swap(side[swaps[k - 1].first], side[swaps[k - 1].second]);
  }
  return best_total;
}

}  // namespace

double CutWeight(const Graph& g, std::span<const int> labels) {
  if (labels.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError("label vector length does not match node count");
  }
  const Graph sym = g.SymmetrizedMax();
  const auto cols = sym.col_indices();
  const auto w = sym.weights();
  double cut = 0.0;
  for (NodeId v = 0; v < sym.num_nodes(); ++v) {
    for (EdgeIndex k = sym.row_begin(v); k < sym.row_end(v); ++k) {
      if (cols[k] > v && labels[v] != labels[cols[k]]) cut += w[k];
    }
  }
  return cut;
}

BisectionResult KernighanLinBisect(const Graph& g, std::uint64_t seed,
                                   int max_passes) {
  const NodeId n = g.num_nodes();
  if (n < 2) throw ValidationError("bisection needs at least two nodes");
  const Graph sym = g.SymmetrizedMax();

  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> side(static_cast<std::size_t>(n), 0);
  for (NodeId k = n / 2; k < n; ++k) side[order[k]] = 1;

  BisectionResult result;
  while (result.passes < max_passes) {
    ++result.passes;
    if (KernighanLinPass(sym, side) <= 0.0) break;
  }
  result.labels = std::move(side);
  result.cut_weight = CutWeight(g, result.labels);
  return result;
}

}  // namespace feedbalance
