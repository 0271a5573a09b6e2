#include "feedbalance/opinions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <string_view>

#include "feedbalance/errors.hpp"

namespace feedbalance {

double Mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

OpinionVector MeanCenter(const OpinionVector& v) {
  OpinionVector out = v;
  const double mu = Mean(v.values);
  for (double& x : out.values) x -= mu;
  // A second correction removes the rounding residue of the first.
  const double residue = Mean(out.values);
  for (double& x : out.values) x -= residue;
  out.centered = true;
  out.removed_mean = (v.centered ? v.removed_mean : 0.0) + mu + residue;
  return out;
}

double RescaleOpinion(double u, double polarization) {
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), 1.0 / polarization), u);
}

OpinionVector GenerateUniform(std::size_t n, double polarization,
                              std::uint64_t seed) {
  if (!(polarization > 0.0)) {
    throw ValidationError("polarization p must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  std::vector<double> v(n);
  for (double& x : v) x = RescaleOpinion(unif(rng), polarization);
  return MeanCenter(OpinionVector(std::move(v)));
}

OpinionVector GenerateGaussianTwoCommunity(std::span<const int> labels,
                                           double polarization,
                                           std::uint64_t seed,
                                           const GaussianOpinionParams& params) {
  if (labels.empty()) {
    throw ValidationError("gaussian opinions need community labels");
  }
  if (!(polarization > 0.0)) {
    throw ValidationError("polarization p must be positive");
  }
  if (!(params.stddev >= 0.0) || !(params.clamp > 0.0)) {
    throw ValidationError("gaussian stddev must be >= 0 and clamp > 0");
  }
  for (const int c : labels) {
    if (c != 0 && c != 1) {
      throw ValidationError("community labels must be 0 or 1");
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double offset = polarization * params.mean_scale;
  std::vector<double> v(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double mean = labels[i] == 1 ? offset : -offset;
    v[i] = std::clamp(mean + params.stddev * noise(rng), -params.clamp,
                      params.clamp);
  }
  return MeanCenter(OpinionVector(std::move(v)));
}

OpinionVector InferInnate(const Graph& g, const OpinionVector& z) {
  if (z.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError("opinion vector length " + std::to_string(z.size()) +
                          " does not match node count " +
                          std::to_string(g.num_nodes()));
  }
  const auto cols = g.col_indices();
  const auto w = g.weights();
  std::vector<double> s(z.size());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.out_count(i) == 0) {
      s[i] = z.values[i];
      continue;
    }
    double az = 0.0;
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      az += w[k] * z.values[cols[k]];
    }
    s[i] = 2.0 * z.values[i] - az;
  }
  return OpinionVector(std::move(s));
}

OpinionVector LoadOpinions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<std::pair<long long, double>> indexed;
  std::vector<double> plain;
  std::string line;
  std::size_t line_no = 0;
  int form = 0;  // 1 = plain values, 2 = node<TAB>value
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ' ||
                             view.back() == '\t')) {
      view.remove_suffix(1);
    }
    while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) {
      view.remove_prefix(1);
    }
    if (view.empty() || view.front() == '#') continue;
    const auto sep = view.find_first_of(" \t");
    const int this_form = sep == std::string_view::npos ? 1 : 2;
    if (form == 0) form = this_form;
    if (form != this_form) {
      throw ParseError("mixed 'value' and 'node<TAB>value' lines", line_no);
    }
    auto parse_double = [&](std::string_view t) {
      double x = 0.0;
      const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
      if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(x)) {
        throw ParseError("cannot parse opinion '" + std::string(t) + "'",
                         line_no);
      }
      return x;
    };
    if (form == 1) {
      plain.push_back(parse_double(view));
    } else {
      const auto id_text = view.substr(0, sep);
      auto rest = view.substr(sep);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
        rest.remove_prefix(1);
      }
      long long id = 0;
      const auto [p, ec] = std::from_chars(
          id_text.data(), id_text.data() + id_text.size(), id);
      if (ec != std::errc() || p != id_text.data() + id_text.size() || id < 0) {
        throw ParseError("cannot parse node id '" + std::string(id_text) + "'",
                         line_no);
      }
      indexed.emplace_back(id, parse_double(rest));
    }
  }
  if (form != 2) return OpinionVector(std::move(plain));

  long long max_id = -1;
  for (const auto& [id, x] : indexed) max_id = std::max(max_id, id);
  std::vector<double> v(static_cast<std::size_t>(max_id + 1), 0.0);
  std::vector<char> seen(v.size(), 0);
  for (const auto& [id, x] : indexed) {
    if (seen[id]) {
      throw ParseError("node " + std::to_string(id) + " listed twice", 0);
    }
    seen[id] = 1;
    v[id] = x;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ParseError("node ids in opinion file are not contiguous", 0);
  }
  return OpinionVector(std::move(v));
}

void SaveOpinions(const OpinionVector& v, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  char buf[32];
  for (const double x : v.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf << '\n';
  }
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace feedbalance
