#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "feedbalance/graph.hpp"
#include "feedbalance/opinions.hpp"

namespace feedbalance::testing {

/// Random row-stochastic graph: each ordered pair is an edge with
/// probability `density`, weights uniform in (0.05, 1], rows normalized.
/// Every node gets at least one out-edge.
Graph RandomRowStochastic(NodeId n, double density, std::uint64_t seed);

/// Like RandomRowStochastic but with an empty row for every node in
/// `empty`.
Graph RandomWithEmptyRows(NodeId n, double density, std::uint64_t seed,
                          const std::vector<NodeId>& empty);

/// N(0, sd²) entries, mean-centered.
OpinionVector RandomOpinions(std::size_t n, std::uint64_t seed,
                             double sd = 0.5);

/// Union of `k` random fixed-point-free permutations with random positive
/// weights. Every edge lies on a permutation, so the pattern has total
/// support.
Graph RandomDerangementUnion(NodeId n, int k, std::uint64_t seed);

Eigen::MatrixXd DenseOf(const Graph& g);
Eigen::VectorXd VecOf(const std::vector<double>& v);

/// Independent dense evaluation of
/// sᵀ(2I − A)⁻ᵀs + sᵀ(2I − A)⁻ᵀ (D_in − I)/2 (2I − A)⁻¹s.
double EigenObjective(const Eigen::MatrixXd& a, const Eigen::VectorXd& s);

/// (2I − A)⁻¹b or (2I − Aᵀ)⁻¹b by dense LU.
Eigen::VectorXd EigenShiftedSolve(const Eigen::MatrixXd& a,
                                  const Eigen::VectorXd& b, bool transpose);

double RelativeError(const std::vector<double>& x, const Eigen::VectorXd& ref);

}  // namespace feedbalance::testing
