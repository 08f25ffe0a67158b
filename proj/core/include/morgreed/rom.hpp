#pragma once

#include <vector>

#include "morgreed/linalg.hpp"
#include "morgreed/system.hpp"

namespace morgreed {

/// Galerkin projection of a ParametricSystem onto span(V). Each affine term
/// is projected once, so evaluating at a new s costs O(terms * r^2) plus an
/// r x r solve. The model is self-contained: it keeps the coefficient
/// functions and does not reference its source system.
class ReducedModel {
 public:
  ReducedModel() = default;
  ReducedModel(BasisMatrix basis, std::vector<Coefficient> coefficients, std::vector<ComplexMatrix> operators,
               ComplexMatrix input, ComplexMatrix output, std::vector<double> delays = {});

  std::size_t order() const noexcept { return basis_.size(); }
  std::size_t num_inputs() const noexcept { return static_cast<std::size_t>(input_.cols()); }
  std::size_t num_outputs() const noexcept { return static_cast<std::size_t>(output_.rows()); }

  const BasisMatrix& basis() const noexcept { return basis_; }
  const std::vector<Coefficient>& coefficients() const noexcept { return coefficients_; }
  const std::vector<ComplexMatrix>& operators() const noexcept { return operators_; }
  const ComplexMatrix& input() const noexcept { return input_; }
  const ComplexMatrix& output() const noexcept { return output_; }
  /// Non-empty when projected from a delay system; the operator list is then
  /// E_0..E_d followed by A_0..A_d.
  const std::vector<double>& delays() const noexcept { return delays_; }

  /// Reduced matrix V^T K(s) V.
  ComplexMatrix assemble(const FrequencyPoint& p) const;

 private:
  BasisMatrix basis_;
  std::vector<Coefficient> coefficients_;
  std::vector<ComplexMatrix> operators_;
  ComplexMatrix input_;
  ComplexMatrix output_;
  std::vector<double> delays_;
};

ReducedModel project(const ParametricSystem& sys, const BasisMatrix& v);

/// z(p) with V^T K V z = V^T B. Not counted as a full-order solve.
ComplexMatrix solve_rom(const ReducedModel& rom, const FrequencyPoint& p);

/// H_hat(s) = C_hat z(p).
ComplexMatrix reduced_transfer(const ReducedModel& rom, const FrequencyPoint& p);

/// max_{i,j} |H_ij(s) - H_hat_ij(s)|; counts one full-order solve.
double output_error(const ParametricSystem& sys, const ReducedModel& rom, const FrequencyPoint& p,
                    SolveCounter* counter = nullptr);

/// Same, against an already computed H(s).
double output_error(const ComplexMatrix& full_transfer, const ReducedModel& rom, const FrequencyPoint& p);

}  // namespace morgreed
