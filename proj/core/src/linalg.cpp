#include "morgreed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "morgreed/error.hpp"

namespace morgreed {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::DuplicateCenters: return "DuplicateCenters";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::FrozenEstimator: return "FrozenEstimator";
    case ErrorCode::EmptyCoarseSet: return "EmptyCoarseSet";
    case ErrorCode::SingularOnGrid: return "SingularOnGrid";
    case ErrorCode::MissingLog: return "MissingLog";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

SparseTriplets::SparseTriplets(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::DimensionMismatch, "sparse matrix must have at least one row and column");
  }
}

void SparseTriplets::add(std::size_t row, std::size_t col, Complex value) {
  if (row >= rows_ || col >= cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "triplet (" + std::to_string(row) + "," + std::to_string(col) + ") out of range");
  }
  entries_.push_back({row, col, value});
}

SparseComplex SparseTriplets::compress() const {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(entries_.size());
  for (const auto& e : entries_) {
    trips.emplace_back(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col), e.value);
  }
  SparseComplex m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseTriplets SparseTriplets::identity(std::size_t n) {
  SparseTriplets t(n, n);
  for (std::size_t i = 0; i < n; ++i) t.add(i, i, 1.0);
  return t;
}

SparseTriplets SparseTriplets::from_dense(const ComplexMatrix& dense) {
  SparseTriplets t(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()));
  for (Eigen::Index j = 0; j < dense.cols(); ++j) {
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
      if (dense(i, j) != Complex(0.0, 0.0)) {
        t.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j));
      }
    }
  }
  return t;
}

BasisMatrix BasisMatrix::from_orthonormal(RealMatrix columns) {
  BasisMatrix b;
  b.columns_ = std::move(columns);
  return b;
}

BasisMatrix BasisMatrix::identity(std::size_t n) {
  return from_orthonormal(RealMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

LuFactor::LuFactor(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "LU requires a non-empty square matrix");
  }
  double max_col_norm = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) max_col_norm = std::max(max_col_norm, a.col(j).norm());
  if (!std::isfinite(max_col_norm)) {
    throw Error(ErrorCode::SingularMatrix, "matrix has non-finite entries");
  }
  lu_.compute(a);
  const double threshold = kSingularPivotTolerance * max_col_norm;
  const auto& packed = lu_.matrixLU();
  for (Eigen::Index k = 0; k < packed.rows(); ++k) {
    const double pivot = std::abs(packed(k, k));
    if (!(pivot > threshold) || pivot == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(k) + " below tolerance");
    }
  }
}

ComplexMatrix LuFactor::solve(const ComplexMatrix& b) const {
  if (b.rows() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side row count does not match");
  }
  ComplexMatrix x = lu_.solve(b);
  if (!all_finite(x)) throw Error(ErrorCode::SingularMatrix, "solution is not finite");
  return x;
}

ComplexMatrix solve_dense(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "coefficient matrix is not square");
  if (b.rows() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side row count does not match");
  return LuFactor(a).solve(b);
}

namespace {

// Two-pass MGS against the first `count` columns of `q`. Returns the
// remaining norm.
double orthogonalize(const RealMatrix& q, Eigen::Index count, Eigen::VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < count; ++k) {
      w.noalias() -= q.col(k).dot(w) * q.col(k);
    }
  }
  return w.norm();
}

BasisMatrix extend_with_candidates(const BasisMatrix& v, const RealMatrix& candidates) {
  const Eigen::Index n = static_cast<Eigen::Index>(v.ambient_dim());
  RealMatrix q(n, v.matrix().cols() + candidates.cols());
  q.leftCols(v.matrix().cols()) = v.matrix();
  Eigen::Index count = v.matrix().cols();
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
    Eigen::VectorXd w = candidates.col(c);
    const double original = w.norm();
    if (!(original > 0.0) || !std::isfinite(original)) continue;
    const double remaining = orthogonalize(q, count, w);
    if (remaining < kDeflationTolerance * original) continue;
    q.col(count++) = w / remaining;
  }
  q.conservativeResize(n, count);
  return BasisMatrix::from_orthonormal(std::move(q));
}

}  // namespace

BasisMatrix orth_extend(const BasisMatrix& v, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != v.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "snapshot dimension differs from basis dimension");
  }
  RealMatrix candidates(x.rows(), 2 * x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    candidates.col(2 * j) = x.col(j).real();
    candidates.col(2 * j + 1) = x.col(j).imag();
  }
  return extend_with_candidates(v, candidates);
}

BasisMatrix orth_extend(const BasisMatrix& v, const RealMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != v.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "snapshot dimension differs from basis dimension");
  }
  return extend_with_candidates(v, x);
}

double gram_residual(const BasisMatrix& v) {
  const RealMatrix& m = v.matrix();
  RealMatrix g = m.transpose() * m;
  g -= RealMatrix::Identity(g.rows(), g.cols());
  return g.size() == 0 ? 0.0 : g.cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

}  // namespace morgreed
