#pragma once

#include <atomic>
#include <cstddef>
#include <variant>
#include <vector>

#include "morgreed/linalg.hpp"

namespace morgreed {

/// A point on the imaginary axis: s = 2*pi*f*i with f in Hz.
struct FrequencyPoint {
  double f = 0.0;
  Complex s{0.0, 0.0};

  static FrequencyPoint from_hz(double f);
};

bool same_frequency(const FrequencyPoint& a, const FrequencyPoint& b) noexcept;

enum class Spacing { Linear, Log };

/// Grid with both endpoints included, uniform in f (Linear) or log10 f (Log).
std::vector<FrequencyPoint> make_grid(double f_low, double f_high, std::size_t cardinality, Spacing spacing);

enum class CoefficientKind {
  Constant,   // scale
  S,          // scale * s
  SExpDelay,  // scale * s * exp(-s tau)
  ExpDelay,   // scale * exp(-s tau)
};

struct Coefficient {
  CoefficientKind kind = CoefficientKind::Constant;
  double tau = 0.0;
  double scale = 1.0;

  Complex operator()(Complex s) const;
};

/// Term coefficients of a delay system in the order E_0..E_d, A_0..A_d:
/// s, s e^{-s tau_j}, then -1, -e^{-s tau_j}.
std::vector<Coefficient> delay_coefficients(const std::vector<double>& delays);

struct AffineTerm {
  Coefficient coefficient;
  SparseTriplets matrix;
};

/// sum_j E_j x'(t - tau_j) = sum_j A_j x(t - tau_j) + B u,  y = C x.
struct DelaySystem {
  std::size_t order = 0;
  std::vector<double> delays;  // tau_0 = 0 < tau_1 < ... < tau_d
  std::vector<SparseTriplets> E;
  std::vector<SparseTriplets> A;
  ComplexMatrix B;
  ComplexMatrix C;

  void check() const;
};

/// M(s) = sum_k theta_k(s) M_k with constant B and C.
struct AffineSystem {
  std::vector<AffineTerm> terms;
  ComplexMatrix B;
  ComplexMatrix C;

  void check() const;
};

/// The full-order model. Immutable after construction; the affine
/// decomposition is shared by both variants.
class ParametricSystem {
 public:
  explicit ParametricSystem(DelaySystem delay);
  explicit ParametricSystem(AffineSystem affine);

  std::size_t order() const noexcept { return order_; }
  std::size_t num_inputs() const noexcept { return static_cast<std::size_t>(input_.cols()); }
  std::size_t num_outputs() const noexcept { return static_cast<std::size_t>(output_.rows()); }

  bool is_delay() const noexcept { return std::holds_alternative<DelaySystem>(source_); }
  const DelaySystem* delay() const noexcept { return std::get_if<DelaySystem>(&source_); }
  const AffineSystem* affine() const noexcept { return std::get_if<AffineSystem>(&source_); }

  const std::vector<Coefficient>& coefficients() const noexcept { return coefficients_; }
  const std::vector<SparseComplex>& term_matrices() const noexcept { return matrices_; }
  const ComplexMatrix& input() const noexcept { return input_; }
  const ComplexMatrix& output() const noexcept { return output_; }

  /// Delay systems: the j-th delay, used to label terms in exports.
  const std::vector<double>& delays() const noexcept { return delays_; }

 private:
  void add_term(const Coefficient& c, const SparseTriplets& m);

  std::variant<DelaySystem, AffineSystem> source_;
  std::size_t order_ = 0;
  std::vector<Coefficient> coefficients_;
  std::vector<SparseComplex> matrices_;
  std::vector<double> delays_;
  ComplexMatrix input_;
  ComplexMatrix output_;
};

/// Counts full-order solves. One solve_fom call is one count regardless of
/// the number of right-hand sides.
class SolveCounter {
 public:
  void increment() noexcept { count_.fetch_add(1, std::memory_order_relaxed); }
  std::size_t count() const noexcept { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::size_t> count_{0};
};

/// Dense K(s) (delay variant) or M(mu) (affine variant).
ComplexMatrix assemble(const ParametricSystem& sys, const FrequencyPoint& p);

/// x(p) with K(s) x = B for all inputs; counts one solve.
ComplexMatrix solve_fom(const ParametricSystem& sys, const FrequencyPoint& p, SolveCounter* counter = nullptr);

/// Solves K(s) X = rhs for an arbitrary block; counts one solve.
ComplexMatrix solve_fom_rhs(const ParametricSystem& sys, const FrequencyPoint& p, const ComplexMatrix& rhs,
                            SolveCounter* counter = nullptr);

/// H(s) = C K(s)^{-1} B.
ComplexMatrix transfer_function(const ParametricSystem& sys, const FrequencyPoint& p,
                                SolveCounter* counter = nullptr);

/// sum_k theta_k(s) M_k y, without forming K(s).
ComplexMatrix apply_operator(const ParametricSystem& sys, const FrequencyPoint& p, const ComplexMatrix& y);

}  // namespace morgreed
