#pragma once

#include <span>
#include <vector>

#include "feedbalance/graph.hpp"

namespace feedbalance {

/// Small dense row-major matrix for reference evaluations on tiny graphs.
/// Nothing here is meant for production sizes.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix Identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  DenseMatrix Transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix ToDense(const Graph& g);

/// Solves ax = b by LU with partial pivoting. Throws ValidationError on a
/// singular or non-square system.
std::vector<double> DenseSolve(DenseMatrix a, std::vector<double> b);

/// sᵀ(2I − A)⁻ᵀs + sᵀ(2I − A)⁻ᵀ (D_in − I)/2 (2I − A)⁻¹s, from dense solves.
double DenseObjective(const DenseMatrix& a, std::span<const double> s);

/// sᵀ(2I − A)⁻¹s.
double DenseUndirectedObjective(const DenseMatrix& a,
                                std::span<const double> s);

}  // namespace feedbalance
