#include "morgreed/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "morgreed/error.hpp"

namespace morgreed {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRegularization = 1e-10;
constexpr double kFitResidual = 1e-8;

bool same_coordinate(double a, double b) noexcept {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double CoordinateMap::operator()(double f) const {
  if (log_scale) {
    const double lo = std::log10(f_low);
    return (std::log10(f) - lo) / (std::log10(f_high) - lo);
  }
  return (f - f_low) / (f_high - f_low);
}

double imq_kernel(double distance, double shape) noexcept {
  const double t = shape * distance;
  return 1.0 / (1.0 + t * t);
}

RbfSurrogate::RbfSurrogate(std::vector<double> centers, std::vector<double> weights, double shape, bool regularized)
    : centers_(std::move(centers)), weights_(std::move(weights)), shape_(shape), regularized_(regularized) {
  if (centers_.empty() || centers_.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "surrogate needs one weight per center");
  }
}

double RbfSurrogate::operator()(double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) sum += weights_[i] * imq_kernel(std::abs(x - centers_[i]), shape_);
  return sum;
}

double rbf_eval(const RbfSurrogate& sur, double x) { return sur(x); }

RbfSurrogate rbf_fit(std::span<const double> centers, std::span<const double> values, double shape) {
  const std::size_t m = centers.size();
  if (m == 0 || values.size() != m) throw Error(ErrorCode::DimensionMismatch, "need one value per center");
  if (!(shape > 0.0)) throw Error(ErrorCode::DegenerateSystem, "shape parameter must be positive");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (same_coordinate(centers[i], centers[j])) throw Error(ErrorCode::DuplicateCenters, "centers must be distinct");
    }
  }

  const auto mi = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd kernel(mi, mi);
  for (Eigen::Index i = 0; i < mi; ++i) {
    for (Eigen::Index j = 0; j < mi; ++j) kernel(i, j) = imq_kernel(std::abs(centers[i] - centers[j]), shape);
  }
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(values.data(), mi);
  std::vector<double> c(centers.begin(), centers.end());

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kernel);
  if (lu.rcond() * kMaxCondition >= 1.0) {
    Eigen::VectorXd w = lu.solve(rhs);
    const double residual = (kernel * w - rhs).norm();
    if (w.allFinite() && residual <= kFitResidual * std::max(1.0, rhs.norm())) {
      return RbfSurrogate(std::move(c), std::vector<double>(w.data(), w.data() + m), shape, false);
    }
  }

  const double lambda = kRegularization * kernel.trace() / static_cast<double>(m);
  Eigen::MatrixXd shifted = kernel + lambda * Eigen::MatrixXd::Identity(mi, mi);
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::DegenerateSystem, "regularized kernel system failed");
  Eigen::VectorXd w = llt.solve(rhs);
  if (!w.allFinite()) throw Error(ErrorCode::DegenerateSystem, "regularized weights are not finite");
  return RbfSurrogate(std::move(c), std::vector<double>(w.data(), w.data() + m), shape, true);
}

std::vector<Candidate> select_candidates(const RbfSurrogate& sur, std::span<const double> fine, std::size_t n_add,
                                         std::span<const double> excluded) {
  std::vector<Candidate> pool;
  pool.reserve(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const bool skip = std::any_of(excluded.begin(), excluded.end(),
                                  [&](double e) { return same_coordinate(e, fine[i]); });
    if (!skip) pool.push_back({i, fine[i], sur(fine[i])});
  }
  const std::size_t keep = std::min(n_add, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.value != b.value) return a.value > b.value;
                      return a.index < b.index;
                    });
  pool.resize(keep);
  return pool;
}

}  // namespace morgreed
