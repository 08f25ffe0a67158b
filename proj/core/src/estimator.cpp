#include "morgreed/estimator.hpp"

#include <algorithm>

#include "morgreed/error.hpp"

namespace morgreed {

ResidualEstimator ResidualEstimator::with_basis(const ParametricSystem& sys, BasisMatrix vr) {
  if (vr.ambient_dim() != sys.order()) {
    throw Error(ErrorCode::DimensionMismatch, "auxiliary basis dimension differs from system order");
  }
  ResidualEstimator est;
  est.basis_ = std::move(vr);
  if (!est.basis_.empty()) est.residual_model_ = project(sys, est.basis_);
  return est;
}

ResidualEstimator ResidualEstimator::update_vr(const ParametricSystem& sys, const BasisMatrix& v,
                                               const FrequencyPoint& p_r, SolveCounter* counter) const {
  if (frozen_) throw Error(ErrorCode::FrozenEstimator, "auxiliary basis is frozen");
  if (v.ambient_dim() != sys.order()) {
    throw Error(ErrorCode::DimensionMismatch, "basis dimension differs from system order");
  }
  const ComplexMatrix snapshot = solve_fom(sys, p_r, counter);
  BasisMatrix vr = v;
  if (!basis_.empty()) vr = orth_extend(vr, basis_.matrix());
  vr = orth_extend(vr, snapshot);
  return with_basis(sys, std::move(vr));
}

BoundEstimator::BoundEstimator(const ParametricSystem& sys, const ReducedModel& rom, const ResidualEstimator& est)
    : sys_(&sys), rom_(&rom), est_(&est) {
  if (rom.basis().ambient_dim() != sys.order() || est.basis().ambient_dim() != sys.order()) {
    throw Error(ErrorCode::DimensionMismatch, "bases must live in the system's state space");
  }
  const ComplexMatrix vr = est.basis().matrix().cast<Complex>();
  const ComplexMatrix v = rom.basis().matrix().cast<Complex>();
  const ComplexMatrix vr_t = vr.transpose();
  cross_.reserve(sys.term_matrices().size());
  for (const auto& m : sys.term_matrices()) {
    ComplexMatrix mv = m * v;
    cross_.emplace_back(vr_t * mv);
  }
  vr_input_ = vr_t * sys.input();
  vr_output_ = sys.output() * vr;
}

BoundEstimator::Pieces BoundEstimator::solve_pieces(const FrequencyPoint& p) const {
  Pieces out;
  out.z = solve_rom(*rom_, p);
  const auto q = static_cast<Eigen::Index>(est_->basis().size());
  if (q == 0) {
    out.z_r = ComplexMatrix::Zero(0, out.z.cols());
    return out;
  }
  ComplexMatrix projected = vr_input_;
  const auto& coefs = sys_->coefficients();
  for (std::size_t t = 0; t < cross_.size(); ++t) {
    projected.noalias() -= coefs[t](p.s) * (cross_[t] * out.z);
  }
  out.z_r = solve_dense(est_->residual_model()->assemble(p), projected);
  return out;
}

EstimatePoint BoundEstimator::evaluate(const FrequencyPoint& p, bool with_residual_norm) const {
  const Pieces pieces = solve_pieces(p);
  EstimatePoint out;
  if (pieces.z_r.rows() > 0) out.estimate = max_abs(vr_output_ * pieces.z_r);
  if (with_residual_norm) {
    ComplexMatrix y = rom_->basis().matrix().cast<Complex>() * pieces.z;
    if (pieces.z_r.rows() > 0) y.noalias() += est_->basis().matrix().cast<Complex>() * pieces.z_r;
    const ComplexMatrix rr = sys_->input() - apply_operator(*sys_, p, y);
    for (Eigen::Index j = 0; j < rr.cols(); ++j) out.residual_norm = std::max(out.residual_norm, rr.col(j).norm());
  }
  return out;
}

ComplexMatrix BoundEstimator::residual_solution(const FrequencyPoint& p) const {
  const Pieces pieces = solve_pieces(p);
  if (pieces.z_r.rows() == 0) return ComplexMatrix::Zero(static_cast<Eigen::Index>(sys_->order()), pieces.z.cols());
  return est_->basis().matrix().cast<Complex>() * pieces.z_r;
}

ComplexMatrix residual(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p) {
  const ComplexMatrix x_hat = rom.basis().matrix().cast<Complex>() * solve_rom(rom, p);
  return sys.input() - apply_operator(sys, p, x_hat);
}

ComplexVector residual(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p,
                       std::size_t input) {
  if (input >= sys.num_inputs()) throw Error(ErrorCode::DimensionMismatch, "input index out of range");
  return residual(sys, rom, p).col(static_cast<Eigen::Index>(input));
}

double estimate(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                const FrequencyPoint& p) {
  return BoundEstimator(sys, rom, est).estimate(p);
}

double residual_of_residual(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                            const FrequencyPoint& p) {
  return BoundEstimator(sys, rom, est).residual_of_residual(p);
}

double delta_diagnostic(const ResidualEstimator& est, const ParametricSystem& sys, const ReducedModel& rom,
                        const FrequencyPoint& p, SolveCounter* counter) {
  const BoundEstimator bound(sys, rom, est);
  const ComplexMatrix exact = solve_fom_rhs(sys, p, residual(sys, rom, p), counter);
  return max_abs(sys.output() * (exact - bound.residual_solution(p)));
}

}  // namespace morgreed
