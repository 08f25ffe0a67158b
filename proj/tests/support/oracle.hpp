#pragma once

// Reference computations for tests. Deliberately avoids the library's own
// assembly and LU paths: matrices are accumulated entry by entry from the
// raw triplets and solved with full pivoting.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "morgreed/system.hpp"

namespace oracle {

using morgreed::Complex;
using morgreed::ComplexMatrix;

inline ComplexMatrix dense(const morgreed::SparseTriplets& m) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (const auto& e : m.entries()) out(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  return out;
}

inline Complex s_of(double f) { return {0.0, 2.0 * std::numbers::pi * f}; }

// K(s) = s sum E_j e^{-s tau_j} - sum A_j e^{-s tau_j}
inline ComplexMatrix delay_k(const morgreed::DelaySystem& sys, Complex s) {
  const auto n = static_cast<Eigen::Index>(sys.order);
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < sys.delays.size(); ++j) {
    const Complex w = std::exp(-s * sys.delays[j]);
    k += s * w * dense(sys.E[j]) - w * dense(sys.A[j]);
  }
  return k;
}

inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) { return a.fullPivLu().solve(b); }

inline ComplexMatrix transfer(const morgreed::DelaySystem& sys, Complex s) {
  return sys.C * solve(delay_k(sys, s), sys.B);
}

// Reduced transfer with V applied explicitly to the full matrices.
inline ComplexMatrix galerkin_transfer(const morgreed::DelaySystem& sys, const Eigen::MatrixXd& v, Complex s) {
  const ComplexMatrix vc = v.cast<Complex>();
  const ComplexMatrix kr = vc.transpose() * delay_k(sys, s) * vc;
  return sys.C * vc * solve(kr, vc.transpose() * sys.B);
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Eigen::MatrixXd random_orthonormal(std::mt19937_64& rng, Eigen::Index n, Eigen::Index r) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
}

// Small dense-ish delay system, stable and well conditioned on [0, 1] Hz
// scale frequencies. Independent of the library's synthetic generator.
inline morgreed::DelaySystem random_delay_system(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                                 std::size_t inputs, std::size_t outputs) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  morgreed::DelaySystem sys;
  sys.order = n;
  sys.delays.push_back(0.0);
  for (std::size_t j = 1; j <= d; ++j) sys.delays.push_back(0.1 * static_cast<double>(j) + 0.05 * uni(rng));
  for (std::size_t j = 0; j <= d; ++j) {
    morgreed::SparseTriplets e(n, n);
    morgreed::SparseTriplets a(n, n);
    const double weight = j == 0 ? 1.0 : 0.02;
    for (std::size_t i = 0; i < n; ++i) {
      if (j == 0) {
        e.add(i, i, 1.0);
        a.add(i, i, -(1.0 + 4.0 * uni(rng)));
      }
      for (int k = 0; k < 3; ++k) {
        const std::size_t col = static_cast<std::size_t>(uni(rng) * static_cast<double>(n)) % n;
        e.add(i, col, 0.05 * weight * normal(rng));
        a.add(i, col, 0.2 * weight * normal(rng));
      }
    }
    sys.E.push_back(e);
    sys.A.push_back(a);
  }
  sys.B.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(inputs));
  sys.C.resize(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < sys.B.size(); ++i) sys.B.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < sys.C.size(); ++i) sys.C.data()[i] = normal(rng);
  return sys;
}

}  // namespace oracle
