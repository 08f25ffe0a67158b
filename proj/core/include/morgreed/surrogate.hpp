#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace morgreed {

inline constexpr double kDefaultRbfShape = 30.0;

/// Maps a frequency in Hz to the surrogate's coordinate: (f - lo) / (hi - lo),
/// optionally on log10 f.
struct CoordinateMap {
  double f_low = 0.0;
  double f_high = 1.0;
  bool log_scale = false;

  double operator()(double f) const;
};

/// Inverse multiquadric kernel 1 / (1 + (a d)^2).
double imq_kernel(double distance, double shape) noexcept;

/// Interpolant sum_i w_i Phi(x - x_i) with the IMQ kernel.
class RbfSurrogate {
 public:
  RbfSurrogate(std::vector<double> centers, std::vector<double> weights, double shape, bool regularized);

  double operator()(double x) const;

  const std::vector<double>& centers() const noexcept { return centers_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double shape() const noexcept { return shape_; }
  bool regularized() const noexcept { return regularized_; }

 private:
  std::vector<double> centers_;
  std::vector<double> weights_;
  double shape_;
  bool regularized_;
};

/// Solves the m x m kernel system for the weights. Falls back to a Tikhonov
/// shifted Cholesky solve when the kernel matrix condition estimate exceeds
/// 1e12. Throws DuplicateCenters / DegenerateSystem.
RbfSurrogate rbf_fit(std::span<const double> centers, std::span<const double> values,
                     double shape = kDefaultRbfShape);

double rbf_eval(const RbfSurrogate& sur, double x);

struct Candidate {
  std::size_t index;  // position in the fine set
  double coordinate;
  double value;
};

/// The `n_add` fine points with the largest surrogate value, descending,
/// ties to the lowest index. Points matching any `excluded` coordinate are
/// skipped.
std::vector<Candidate> select_candidates(const RbfSurrogate& sur, std::span<const double> fine, std::size_t n_add,
                                         std::span<const double> excluded = {});

}  // namespace morgreed
