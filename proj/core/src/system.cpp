#include "morgreed/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "morgreed/error.hpp"

namespace morgreed {

FrequencyPoint FrequencyPoint::from_hz(double f) {
  return FrequencyPoint{f, Complex(0.0, 2.0 * std::numbers::pi * f)};
}

bool same_frequency(const FrequencyPoint& a, const FrequencyPoint& b) noexcept {
  const double scale = std::max({1.0, std::abs(a.f), std::abs(b.f)});
  return std::abs(a.f - b.f) <= 1e-12 * scale;
}

std::vector<FrequencyPoint> make_grid(double f_low, double f_high, std::size_t cardinality, Spacing spacing) {
  if (!(f_low > 0.0) || !(f_high > f_low) || !std::isfinite(f_high)) {
    throw Error(ErrorCode::InvalidRange, "grid requires 0 < f_low < f_high");
  }
  if (cardinality < 2) throw Error(ErrorCode::InvalidRange, "grid cardinality must be at least 2");

  std::vector<FrequencyPoint> grid;
  grid.reserve(cardinality);
  const double steps = static_cast<double>(cardinality - 1);
  if (spacing == Spacing::Linear) {
    const double h = (f_high - f_low) / steps;
    for (std::size_t i = 0; i + 1 < cardinality; ++i) {
      grid.push_back(FrequencyPoint::from_hz(f_low + static_cast<double>(i) * h));
    }
  } else {
    const double lo = std::log10(f_low);
    const double hi = std::log10(f_high);
    const double h = (hi - lo) / steps;
    grid.push_back(FrequencyPoint::from_hz(f_low));
    for (std::size_t i = 1; i + 1 < cardinality; ++i) {
      grid.push_back(FrequencyPoint::from_hz(std::pow(10.0, lo + static_cast<double>(i) * h)));
    }
  }
  grid.push_back(FrequencyPoint::from_hz(f_high));
  return grid;
}

Complex Coefficient::operator()(Complex s) const {
  switch (kind) {
    case CoefficientKind::Constant: return {scale, 0.0};
    case CoefficientKind::S: return scale * s;
    case CoefficientKind::SExpDelay: return scale * s * std::exp(-s * tau);
    case CoefficientKind::ExpDelay: return scale * std::exp(-s * tau);
  }
  return {0.0, 0.0};
}

std::vector<Coefficient> delay_coefficients(const std::vector<double>& delays) {
  std::vector<Coefficient> out;
  out.reserve(2 * delays.size());
  for (std::size_t j = 0; j < delays.size(); ++j) {
    out.push_back(j == 0 ? Coefficient{CoefficientKind::S, 0.0, 1.0}
                         : Coefficient{CoefficientKind::SExpDelay, delays[j], 1.0});
  }
  for (std::size_t j = 0; j < delays.size(); ++j) {
    out.push_back(j == 0 ? Coefficient{CoefficientKind::Constant, 0.0, -1.0}
                         : Coefficient{CoefficientKind::ExpDelay, delays[j], -1.0});
  }
  return out;
}

void DelaySystem::check() const {
  if (order == 0) throw Error(ErrorCode::InvalidModel, "order must be positive");
  if (delays.empty() || delays.front() != 0.0) {
    throw Error(ErrorCode::InvalidModel, "delays must start with tau_0 = 0");
  }
  for (std::size_t j = 1; j < delays.size(); ++j) {
    if (!(delays[j] > delays[j - 1]) || !std::isfinite(delays[j])) {
      throw Error(ErrorCode::InvalidModel, "delays must be strictly increasing");
    }
  }
  if (E.size() != delays.size() || A.size() != delays.size()) {
    throw Error(ErrorCode::InvalidModel, "need one E_j and one A_j per delay");
  }
  for (std::size_t j = 0; j < delays.size(); ++j) {
    if (E[j].rows() != order || E[j].cols() != order || A[j].rows() != order || A[j].cols() != order) {
      throw Error(ErrorCode::DimensionMismatch, "E_" + std::to_string(j) + "/A_" + std::to_string(j) +
                                                    " must be order x order");
    }
  }
  if (static_cast<std::size_t>(B.rows()) != order || B.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "B must be order x num_inputs");
  }
  if (static_cast<std::size_t>(C.cols()) != order || C.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "C must be num_outputs x order");
  }
}

void AffineSystem::check() const {
  if (terms.empty()) throw Error(ErrorCode::InvalidModel, "affine system needs at least one term");
  const std::size_t n = terms.front().matrix.rows();
  for (const auto& t : terms) {
    if (t.matrix.rows() != n || t.matrix.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "affine terms must be square and of equal size");
    }
  }
  if (static_cast<std::size_t>(B.rows()) != n || B.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "B must be n x num_inputs");
  }
  if (static_cast<std::size_t>(C.cols()) != n || C.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "C must be num_outputs x n");
  }
}

ParametricSystem::ParametricSystem(DelaySystem delay) : source_(std::move(delay)) {
  const auto& d = std::get<DelaySystem>(source_);
  d.check();
  order_ = d.order;
  delays_ = d.delays;
  const std::vector<Coefficient> coefficients = delay_coefficients(d.delays);
  const std::size_t terms = d.delays.size();
  for (std::size_t j = 0; j < terms; ++j) add_term(coefficients[j], d.E[j]);
  for (std::size_t j = 0; j < terms; ++j) add_term(coefficients[terms + j], d.A[j]);
  input_ = d.B;
  output_ = d.C;
}

ParametricSystem::ParametricSystem(AffineSystem affine) : source_(std::move(affine)) {
  const auto& a = std::get<AffineSystem>(source_);
  a.check();
  order_ = a.terms.front().matrix.rows();
  for (const auto& t : a.terms) add_term(t.coefficient, t.matrix);
  input_ = a.B;
  output_ = a.C;
}

void ParametricSystem::add_term(const Coefficient& c, const SparseTriplets& m) {
  coefficients_.push_back(c);
  matrices_.push_back(m.compress());
}

ComplexMatrix assemble(const ParametricSystem& sys, const FrequencyPoint& p) {
  const auto n = static_cast<Eigen::Index>(sys.order());
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  const auto& mats = sys.term_matrices();
  const auto& coefs = sys.coefficients();
  for (std::size_t t = 0; t < mats.size(); ++t) {
    const Complex theta = coefs[t](p.s);
    for (Eigen::Index col = 0; col < mats[t].outerSize(); ++col) {
      for (SparseComplex::InnerIterator it(mats[t], col); it; ++it) {
        k(it.row(), it.col()) += theta * it.value();
      }
    }
  }
  return k;
}

ComplexMatrix solve_fom_rhs(const ParametricSystem& sys, const FrequencyPoint& p, const ComplexMatrix& rhs,
                            SolveCounter* counter) {
  LuFactor lu(assemble(sys, p));
  if (counter != nullptr) counter->increment();
  return lu.solve(rhs);
}

ComplexMatrix solve_fom(const ParametricSystem& sys, const FrequencyPoint& p, SolveCounter* counter) {
  return solve_fom_rhs(sys, p, sys.input(), counter);
}

ComplexMatrix transfer_function(const ParametricSystem& sys, const FrequencyPoint& p, SolveCounter* counter) {
  return sys.output() * solve_fom(sys, p, counter);
}

ComplexMatrix apply_operator(const ParametricSystem& sys, const FrequencyPoint& p, const ComplexMatrix& y) {
  if (static_cast<std::size_t>(y.rows()) != sys.order()) {
    throw Error(ErrorCode::DimensionMismatch, "operand row count differs from system order");
  }
  ComplexMatrix out = ComplexMatrix::Zero(y.rows(), y.cols());
  const auto& mats = sys.term_matrices();
  const auto& coefs = sys.coefficients();
  for (std::size_t t = 0; t < mats.size(); ++t) {
    out.noalias() += coefs[t](p.s) * (mats[t] * y);
  }
  return out;
}

}  // namespace morgreed
