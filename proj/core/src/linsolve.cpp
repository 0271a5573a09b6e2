#include "feedbalance/linsolve.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

void CheckSize(const Graph& g, std::size_t size) {
  if (size != static_cast<std::size_t>(g.num_nodes())) {
    throw ValidationError("vector length " + std::to_string(size) +
                          " does not match node count " +
                          std::to_string(g.num_nodes()));
  }
}

// Matrix-free operator with an optional Jacobi scaling.
class ShiftedOperator {
 public:
  ShiftedOperator(const Graph& g, Orientation orientation,
                  Preconditioner preconditioner)
      : g_(g), orientation_(orientation) {
    if (preconditioner == Preconditioner::kJacobi) {
      inv_diag_.assign(static_cast<std::size_t>(g.num_nodes()), 0.5);
      const auto cols = g.col_indices();
      const auto w = g.weights();
      for (NodeId i = 0; i < g.num_nodes(); ++i) {
        for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
          if (cols[k] == i) inv_diag_[i] = 1.0 / (2.0 - w[k]);
        }
      }
    }
  }

  void Apply(std::span<const double> v, std::span<double> out) const {
    ApplyShifted(g_, orientation_, v, out);
  }

  void Precondition(std::span<const double> v, std::span<double> out) const {
    if (inv_diag_.empty()) {
      std::copy(v.begin(), v.end(), out.begin());
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = inv_diag_[i] * v[i];
  }

 private:
  const Graph& g_;
  Orientation orientation_;
  std::vector<double> inv_diag_;
};

}  // namespace

void ApplyShifted(const Graph& g, Orientation orientation,
                  std::span<const double> v, std::span<double> out) {
  CheckSize(g, v.size());
  CheckSize(g, out.size());
  const auto cols = g.col_indices();
  const auto w = g.weights();
  const NodeId n = g.num_nodes();
  if (orientation == Orientation::kForward) {
    for (NodeId i = 0; i < n; ++i) {
      double acc = 0.0;
      for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
        acc += w[k] * v[cols[k]];
      }
      out[i] = 2.0 * v[i] - acc;
    }
  } else {
    for (NodeId i = 0; i < n; ++i) out[i] = 2.0 * v[i];
    for (NodeId i = 0; i < n; ++i) {
      const double vi = v[i];
      for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
        out[cols[k]] -= w[k] * vi;
      }
    }
  }
}

std::vector<double> ApplyShifted(const Graph& g, Orientation orientation,
                                 std::span<const double> v) {
  std::vector<double> out(v.size());
  ApplyShifted(g, orientation, v, out);
  return out;
}

SolveResult SolveShifted(const Graph& g, Orientation orientation,
                         std::span<const double> b, const SolverConfig& cfg) {
  CheckSize(g, b.size());
  if (!(cfg.rel_tolerance > 0.0)) {
    throw ValidationError("solver tolerance must be positive");
  }
  const std::size_t n = b.size();
  SolveResult result;
  result.solution.assign(n, 0.0);
  const double b_norm = Norm(b);
  if (!std::isfinite(b_norm)) {
    throw ValidationError("right-hand side has non-finite entries");
  }
  if (b_norm == 0.0) return result;

  const std::int64_t max_iterations =
      cfg.max_iterations > 0 ? cfg.max_iterations
                             : 10 * static_cast<std::int64_t>(n);
  const double tol = cfg.rel_tolerance;
  const double eps2 = std::numeric_limits<double>::epsilon() *
                      std::numeric_limits<double>::epsilon();
  ShiftedOperator op(g, orientation, cfg.preconditioner);

  std::vector<double>& x = result.solution;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> r_hat = r;
  std::vector<double> p(n, 0.0);
  std::vector<double> v(n, 0.0);
  std::vector<double> s(n);
  std::vector<double> t(n);
  std::vector<double> p_hat(n);
  std::vector<double> s_hat(n);
  std::vector<double> scratch(n);

  double rho_prev = 1.0;
  double alpha = 1.0;
  double omega = 1.0;
  bool fresh = true;
  double best_residual = 1.0;
  std::mt19937_64 rng(cfg.seed);

  // Recomputes r = b - Ax and reports whether the true residual meets tol.
  auto refresh_residual = [&]() {
    op.Apply(x, scratch);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - scratch[i];
    const double rel = Norm(r) / b_norm;
    best_residual = std::min(best_residual, rel);
    result.final_residual = rel;
    return rel <= tol;
  };

  auto breakdown = [&](const char* what) {
    if (result.breakdown_restarts >= 1) {
      throw ConvergenceError(std::string("BiCGStab broke down twice (") + what +
                                 ")",
                             best_residual, result.iterations);
    }
    ++result.breakdown_restarts;
    refresh_residual();
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& e : r_hat) e = normal(rng);
    fresh = true;
  };

  while (result.iterations < max_iterations) {
    const double rho = Dot(r_hat, r);
    if (std::abs(rho) < eps2 * Dot(r_hat, r_hat)) {
      breakdown("rho vanished");
      continue;
    }
    if (fresh) {
      p = r;
      fresh = false;
    } else {
      const double beta = (rho / rho_prev) * (alpha / omega);
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = r[i] + beta * (p[i] - omega * v[i]);
      }
    }
    op.Precondition(p, p_hat);
    op.Apply(p_hat, v);
    const double denom = Dot(r_hat, v);
    if (std::abs(denom) < eps2 * Norm(r_hat) * Norm(v) || denom == 0.0) {
      breakdown("<r_hat, v> vanished");
      continue;
    }
    alpha = rho / denom;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    ++result.iterations;

    if (Norm(s) / b_norm <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p_hat[i];
      if (refresh_residual()) return result;
      fresh = true;
      rho_prev = rho;
      continue;
    }

    op.Precondition(s, s_hat);
    op.Apply(s_hat, t);
    const double tt = Dot(t, t);
    omega = tt > 0.0 ? Dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p_hat[i] + omega * s_hat[i];
      r[i] = s[i] - omega * t[i];
    }
    const double rel = Norm(r) / b_norm;
    best_residual = std::min(best_residual, rel);
    if (!std::isfinite(rel)) {
      throw ConvergenceError("BiCGStab produced non-finite residual",
                             best_residual, result.iterations);
    }
    if (rel <= tol) {
      // The recursive residual can drift; accept only the true residual.
      if (refresh_residual()) return result;
      fresh = true;
    } else if (omega == 0.0 ||
               std::abs(omega) < std::numeric_limits<double>::epsilon()) {
      breakdown("omega vanished");
      continue;
    }
    rho_prev = rho;
  }
  throw ConvergenceError("BiCGStab did not reach relative residual " +
                             std::to_string(tol) + " within " +
                             std::to_string(max_iterations) + " iterations",
                         best_residual, result.iterations);
}

}  // namespace feedbalance
