#pragma once

// Output-error estimation through a reduced residual system.
//
// For the ROM solution x_hat_j = V z_j the residual r_j = B_j - K(s) x_hat_j
// drives the residual system K(s) x_r = r_j, whose solution maps exactly to
// the output error: y_ij - y_hat_ij = C_i x_r. The residual system is itself
// reduced with an auxiliary basis V_r, giving the estimate
//
//   est(s) = max_ij |C_i V_r z_r_j(s)|,   V_r^T K V_r z_r_j = V_r^T r_j.
//
// With V_r = V the projected residual vanishes and the estimate is zero, so
// V_r is grown separately from snapshots at points where the residual system
// is worst resolved.

#include <optional>

#include "morgreed/linalg.hpp"
#include "morgreed/rom.hpp"
#include "morgreed/system.hpp"

namespace morgreed {

class ResidualEstimator {
 public:
  ResidualEstimator() = default;
  explicit ResidualEstimator(std::size_t order) : basis_(order) {}

  /// Estimator with a prescribed auxiliary basis.
  static ResidualEstimator with_basis(const ParametricSystem& sys, BasisMatrix vr);

  const BasisMatrix& basis() const noexcept { return basis_; }
  /// Projection of the source system onto V_r; empty while V_r is empty.
  const std::optional<ReducedModel>& residual_model() const noexcept { return residual_model_; }

  bool frozen() const noexcept { return frozen_; }
  /// One-way latch: a frozen estimator rejects further updates.
  void freeze() noexcept { frozen_ = true; }

  /// Solves the full model at `p_r` (one counted solve) and rebuilds V_r as
  /// orth{V, V_r, x(p_r)}. Throws FrozenEstimator once frozen.
  ResidualEstimator update_vr(const ParametricSystem& sys, const BasisMatrix& v, const FrequencyPoint& p_r,
                              SolveCounter* counter = nullptr) const;

 private:
  BasisMatrix basis_;
  std::optional<ReducedModel> residual_model_;
  bool frozen_ = false;
};

struct EstimatePoint {
  double estimate = 0.0;       // max_ij |C_i x_hat_r_j|
  double residual_norm = 0.0;  // max_j ||r_j - K x_hat_r_j||
};

/// Estimator bound to one (system, ROM, V_r) triple. Precomputes the cross
/// terms V_r^T M_k V so that each evaluation only touches reduced matrices
/// plus sparse products for the residual norm.
class BoundEstimator {
 public:
  BoundEstimator(const ParametricSystem& sys, const ReducedModel& rom, const ResidualEstimator& est);

  EstimatePoint evaluate(const FrequencyPoint& p, bool with_residual_norm = true) const;
  double estimate(const FrequencyPoint& p) const { return evaluate(p, false).estimate; }
  double residual_of_residual(const FrequencyPoint& p) const { return evaluate(p, true).residual_norm; }

  /// x_hat_r = V_r z_r for every input column (n x n_I).
  ComplexMatrix residual_solution(const FrequencyPoint& p) const;

 private:
  struct Pieces {
    ComplexMatrix z;    // r x n_I
    ComplexMatrix z_r;  // q x n_I
  };
  Pieces solve_pieces(const FrequencyPoint& p) const;

  const ParametricSystem* sys_;
  const ReducedModel* rom_;
  const ResidualEstimator* est_;
  std::vector<ComplexMatrix> cross_;  // V_r^T M_k V
  ComplexMatrix vr_input_;            // V_r^T B
  ComplexMatrix vr_output_;           // C V_r
};

/// r_j(s) = B_j - K(s) V z_j(s) for all columns (n x n_I).
ComplexMatrix residual(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p);
ComplexVector residual(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p,
                       std::size_t input);

double estimate(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                const FrequencyPoint& p);
double residual_of_residual(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                            const FrequencyPoint& p);

/// delta(s) = max_ij |C_i (x_r_j - x_hat_r_j)| with the residual system
/// solved exactly (one counted solve). Diagnostic only.
double delta_diagnostic(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                        const FrequencyPoint& p, SolveCounter* counter = nullptr);

}  // namespace morgreed
