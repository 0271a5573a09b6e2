#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

/// Per-node opinion values. `centered` records that `removed_mean` was
/// subtracted to bring the mean to zero.
struct OpinionVector {
  std::vector<double> values;
  bool centered = false;
  double removed_mean = 0.0;

  OpinionVector() = default;
  explicit OpinionVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
};

OpinionVector MeanCenter(const OpinionVector& v);

double Mean(std::span<const double> v);

/// Raw u ~ Uniform[-0.5, 0.5] mapped through sign(u)|u|^(1/p), then centered.
OpinionVector GenerateUniform(std::size_t n, double polarization,
                              std::uint64_t seed);

/// sign(u)|u|^(1/p); the rescaling applied by GenerateUniform.
double RescaleOpinion(double u, double polarization);

struct GaussianOpinionParams {
  /// Community c has mean (2c - 1) * p * mean_scale.
  double mean_scale = 0.05;
  double stddev = 0.1;
  /// Samples are clamped to [-clamp, clamp] before centering.
  double clamp = 1.0;
};

/// Two Gaussian communities selected by 0/1 labels, separation proportional
/// to the polarization p; clamped, then mean-centered.
OpinionVector GenerateGaussianTwoCommunity(std::span<const int> labels,
                                           double polarization,
                                           std::uint64_t seed,
                                           const GaussianOpinionParams& params =
                                               {});

/// Innate opinions that produce `z` at FJ equilibrium: s = (2I - A)z, one
/// sparse product. Rows without out-edges keep s_i = z_i, matching the
/// empty-row rule of the dynamics.
OpinionVector InferInnate(const Graph& g, const OpinionVector& z);

/// One value per line, or `node<TAB>value` lines (auto-detected).
OpinionVector LoadOpinions(const std::filesystem::path& path);
void SaveOpinions(const OpinionVector& v, const std::filesystem::path& path);

}  // namespace feedbalance
