#include "morgreed/rom.hpp"

#include "morgreed/error.hpp"

namespace morgreed {

ReducedModel::ReducedModel(BasisMatrix basis, std::vector<Coefficient> coefficients,
                           std::vector<ComplexMatrix> operators, ComplexMatrix input, ComplexMatrix output,
                           std::vector<double> delays)
    : basis_(std::move(basis)),
      coefficients_(std::move(coefficients)),
      operators_(std::move(operators)),
      input_(std::move(input)),
      output_(std::move(output)),
      delays_(std::move(delays)) {
  const auto r = static_cast<Eigen::Index>(basis_.size());
  if (coefficients_.size() != operators_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one coefficient per projected operator");
  }
  for (const auto& op : operators_) {
    if (op.rows() != r || op.cols() != r) throw Error(ErrorCode::DimensionMismatch, "projected operator must be r x r");
  }
  if (input_.rows() != r || output_.cols() != r) {
    throw Error(ErrorCode::DimensionMismatch, "projected input/output dimensions inconsistent with r");
  }
}

ComplexMatrix ReducedModel::assemble(const FrequencyPoint& p) const {
  const auto r = static_cast<Eigen::Index>(order());
  ComplexMatrix k = ComplexMatrix::Zero(r, r);
  for (std::size_t t = 0; t < operators_.size(); ++t) {
    k.noalias() += coefficients_[t](p.s) * operators_[t];
  }
  return k;
}

ReducedModel project(const ParametricSystem& sys, const BasisMatrix& v) {
  if (v.empty()) throw Error(ErrorCode::DimensionMismatch, "cannot project onto an empty basis");
  if (v.ambient_dim() != sys.order()) {
    throw Error(ErrorCode::DimensionMismatch, "basis dimension differs from system order");
  }
  const ComplexMatrix vc = v.matrix().cast<Complex>();
  const ComplexMatrix vt = vc.transpose();
  std::vector<ComplexMatrix> ops;
  ops.reserve(sys.term_matrices().size());
  for (const auto& m : sys.term_matrices()) {
    ComplexMatrix mv = m * vc;
    ops.emplace_back(vt * mv);
  }
  return ReducedModel(v, sys.coefficients(), std::move(ops), vt * sys.input(), sys.output() * vc, sys.delays());
}

ComplexMatrix solve_rom(const ReducedModel& rom, const FrequencyPoint& p) {
  if (rom.order() == 0) throw Error(ErrorCode::DimensionMismatch, "reduced model is empty");
  return solve_dense(rom.assemble(p), rom.input());
}

ComplexMatrix reduced_transfer(const ReducedModel& rom, const FrequencyPoint& p) {
  return rom.output() * solve_rom(rom, p);
}

double output_error(const ComplexMatrix& full_transfer, const ReducedModel& rom, const FrequencyPoint& p) {
  const ComplexMatrix reduced = reduced_transfer(rom, p);
  if (reduced.rows() != full_transfer.rows() || reduced.cols() != full_transfer.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "transfer function shapes differ");
  }
  return max_abs(full_transfer - reduced);
}

double output_error(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p,
                    SolveCounter* counter) {
  return output_error(transfer_function(sys, p, counter), rom, p);
}

}  // namespace morgreed
