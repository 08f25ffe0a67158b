#pragma once

// Dense/sparse complex containers, direct solves and orthonormalization.

#include <complex>
#include <cstddef>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace morgreed {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using SparseComplex = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

inline constexpr double kDeflationTolerance = 1e-10;
inline constexpr double kSingularPivotTolerance = 1e-14;

/// Sparse matrix given as (row, col, value) triples; duplicates are summed
/// when the matrix is compressed.
class SparseTriplets {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
  };

  SparseTriplets() = default;
  SparseTriplets(std::size_t rows, std::size_t cols);

  void add(std::size_t row, std::size_t col, Complex value);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Compressed column-major form with duplicates summed.
  SparseComplex compress() const;

  static SparseTriplets identity(std::size_t n);
  static SparseTriplets from_dense(const ComplexMatrix& dense);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

/// Real matrix with orthonormal columns. May hold zero columns.
class BasisMatrix {
 public:
  BasisMatrix() = default;
  explicit BasisMatrix(std::size_t ambient_dim) : columns_(static_cast<Eigen::Index>(ambient_dim), 0) {}

  /// Adopts `columns` as-is; callers guarantee orthonormality.
  static BasisMatrix from_orthonormal(RealMatrix columns);
  static BasisMatrix identity(std::size_t n);

  std::size_t ambient_dim() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(columns_.cols()); }
  bool empty() const noexcept { return columns_.cols() == 0; }

  const RealMatrix& matrix() const noexcept { return columns_; }

 private:
  RealMatrix columns_;
};

/// LU factorization with partial pivoting and a pivot-based singularity test.
class LuFactor {
 public:
  explicit LuFactor(const ComplexMatrix& a);

  ComplexMatrix solve(const ComplexMatrix& b) const;
  Eigen::Index size() const noexcept { return lu_.matrixLU().rows(); }

 private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

/// Solves A X = B. Throws SingularMatrix or DimensionMismatch.
ComplexMatrix solve_dense(const ComplexMatrix& a, const ComplexMatrix& b);

/// Extends V by the real and imaginary parts of the columns of X using
/// modified Gram-Schmidt (two passes) with deflation. Columns of V are kept
/// unchanged.
BasisMatrix orth_extend(const BasisMatrix& v, const ComplexMatrix& x);
BasisMatrix orth_extend(const BasisMatrix& v, const RealMatrix& x);

/// max |V^T V - I|.
double gram_residual(const BasisMatrix& v);

double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

}  // namespace morgreed
