#pragma once

// Dense real symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit-shift QL iteration. Eigenvectors are stored as
// rows so every update in the hot loops runs over contiguous memory.

#include <cstddef>
#include <span>
#include <vector>

namespace fraclab::linalg {

/// Square row-major matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  bool is_symmetric() const noexcept;
  /// Max absolute row sum (infinity norm).
  double norm_inf() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenSystem {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // row k is the eigenvector of values[k]
  int ql_iterations = 0;
};

/// y = A x
void multiply(const DenseMatrix& a, std::span<const double> x, std::span<double> y);

/// Full spectrum of a real symmetric matrix. Eigenvectors are orthonormal,
/// with the sign fixed so the largest-magnitude component (first one on
/// ties) is positive. Throws ConvergenceFailure.
EigenSystem symmetric_eigen(const DenseMatrix& a);

/// Same for a symmetric tridiagonal matrix given by its diagonal and its
/// first off-diagonal (offdiag.size() == diag.size() - 1).
EigenSystem tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag);

}  // namespace fraclab::linalg
