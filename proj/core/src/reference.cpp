#include "feedbalance/reference.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "feedbalance/errors.hpp"

namespace feedbalance {

namespace {

DenseMatrix Shifted(const DenseMatrix& a) {
  DenseMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m(i, j) = (i == j ? 2.0 : 0.0) - a(i, j);
    }
  }
  return m;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void CheckSquare(const DenseMatrix& a, std::size_t n) {
  if (a.rows() != a.cols() || a.rows() != n) {
    throw ValidationError("dense system dimensions do not match");
  }
}

}  // namespace

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::Transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

DenseMatrix ToDense(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  DenseMatrix a(n, n);
  const auto cols = g.col_indices();
  const auto w = g.weights();
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (EdgeIndex k = g.row_begin(i); k < g.row_end(i); ++k) {
      a(static_cast<std::size_t>(i), static_cast<std::size_t>(cols[k])) = w[k];
    }
  }
  return a;
}

std::vector<double> DenseSolve(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  CheckSquare(a, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw ValidationError("singular dense system");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * b[j];
    b[i] = acc / a(i, i);
  }
  return b;
}

double DenseObjective(const DenseMatrix& a, std::span<const double> s) {
  const std::size_t n = s.size();
  CheckSquare(a, n);
  const DenseMatrix m = Shifted(a);
  const std::vector<double> sv(s.begin(), s.end());
  const std::vector<double> z = DenseSolve(m, sv);
  const std::vector<double> y = DenseSolve(m.Transposed(), sv);
  double second = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d_in = 0.0;
    for (std::size_t r = 0; r < n; ++r) d_in += a(r, i);
    second += z[i] * 0.5 * (d_in - 1.0) * z[i];
  }
  return Dot(s, y) + second;
}

double DenseUndirectedObjective(const DenseMatrix& a,
                                std::span<const double> s) {
  CheckSquare(a, s.size());
  const std::vector<double> z =
      DenseSolve(Shifted(a), std::vector<double>(s.begin(), s.end()));
  return Dot(s, z);
}

}  // namespace feedbalance
