#include "morgreed/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morgreed/error.hpp"

namespace morgreed {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::size_t Rng::index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

void SyntheticSpec::check() const {
  if (order < 2) throw Error(ErrorCode::InvalidConfig, "synthetic order must be at least 2");
  if (inputs == 0 || outputs == 0) throw Error(ErrorCode::InvalidConfig, "need at least one input and output");
  if (!(f_low > 0.0) || !(f_high > f_low)) throw Error(ErrorCode::InvalidRange, "need 0 < f_low < f_high");
  if (density < 0.0 || density > 1.0) throw Error(ErrorCode::InvalidConfig, "density must lie in [0, 1]");
  if (!(damping_min > 0.0) || damping_max < damping_min || damping_max >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "damping range must satisfy 0 < min <= max < 1");
  }
  if (!(max_delay > 0.0)) throw Error(ErrorCode::InvalidConfig, "max_delay must be positive");
}

namespace {

double frobenius(const SparseTriplets& m) { return m.compress().norm(); }

void scale_entries(SparseTriplets& m, double factor) {
  SparseTriplets scaled(m.rows(), m.cols());
  for (const auto& e : m.entries()) scaled.add(e.row, e.col, e.value * factor);
  m = std::move(scaled);
}

void scatter(SparseTriplets& m, Rng& rng, std::size_t count, double magnitude, bool off_diagonal_only) {
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = rng.index(n);
    std::size_t j = rng.index(n);
    if (off_diagonal_only && i == j) j = (j + 1) % n;
    m.add(i, j, rng.normal() * magnitude);
  }
}

bool nonsingular_on_band(const DelaySystem& sys, double f_low, double f_high) {
  const ParametricSystem model(sys);
  for (double f : {f_low, 0.5 * (f_low + f_high), f_high}) {
    try {
      LuFactor lu(assemble(model, FrequencyPoint::from_hz(f)));
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace

DelaySystem generate_synthetic(const SyntheticSpec& spec) {
  spec.check();
  Rng rng(spec.seed);
  const std::size_t n = spec.order;
  const double omega = 2.0 * std::numbers::pi * spec.f_high;
  const std::size_t modes = spec.modes == 0 ? std::min<std::size_t>(n / 2, 16) : std::min(spec.modes, n / 2);
  const auto fill = static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(n * (n - 1))));

  DelaySystem sys;
  sys.order = n;
  sys.delays.push_back(0.0);
  std::vector<double> taus;
  for (std::size_t j = 0; j < spec.delays; ++j) taus.push_back(rng.uniform(0.02, 1.0) * spec.max_delay / spec.f_high);
  std::sort(taus.begin(), taus.end());
  for (double t : taus) {
    if (t > sys.delays.back()) sys.delays.push_back(t);
  }
  // Ties are astronomically unlikely; keep d + 1 terms regardless.
  while (sys.delays.size() < spec.delays + 1) sys.delays.push_back(std::nextafter(sys.delays.back(), 1.0));

  // Undelayed terms: E_0 = I + small coupling, A_0 = modal blocks + fast poles.
  SparseTriplets e0 = SparseTriplets::identity(n);
  scatter(e0, rng, fill, spec.coupling, true);
  SparseTriplets a0(n, n);
  const double band_lo = std::max(0.05 * spec.f_high, spec.f_low);
  for (std::size_t k = 0; k < modes; ++k) {
    const double w = 2.0 * std::numbers::pi * rng.uniform(band_lo, 0.95 * spec.f_high);
    const double zeta = rng.uniform(spec.damping_min, spec.damping_max);
    const double sigma = -zeta * w;
    const double wd = w * std::sqrt(1.0 - zeta * zeta);
    a0.add(2 * k, 2 * k, sigma);
    a0.add(2 * k, 2 * k + 1, wd);
    a0.add(2 * k + 1, 2 * k, -wd);
    a0.add(2 * k + 1, 2 * k + 1, sigma);
  }
  for (std::size_t i = 2 * modes; i < n; ++i) a0.add(i, i, -omega * rng.uniform(2.0, 20.0));
  scatter(a0, rng, fill, spec.coupling * omega, true);

  const double e0_norm = frobenius(e0);
  const double a0_norm = frobenius(a0);
  sys.E.push_back(e0);
  sys.A.push_back(a0);
  const std::size_t delayed_fill = std::max<std::size_t>(fill, n);
  for (std::size_t j = 1; j < sys.delays.size(); ++j) {
    SparseTriplets ej(n, n);
    SparseTriplets aj(n, n);
    scatter(ej, rng, delayed_fill, spec.delayed_ratio, false);
    scatter(aj, rng, delayed_fill, spec.delayed_ratio * omega, false);
    if (const double r = frobenius(ej); r > 0.1 * e0_norm) scale_entries(ej, 0.1 * e0_norm / r);
    if (const double r = frobenius(aj); r > 0.1 * a0_norm) scale_entries(aj, 0.1 * a0_norm / r);
    sys.E.push_back(std::move(ej));
    sys.A.push_back(std::move(aj));
  }

  sys.B.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.inputs));
  for (Eigen::Index j = 0; j < sys.B.cols(); ++j) {
    for (Eigen::Index i = 0; i < sys.B.rows(); ++i) sys.B(i, j) = rng.normal() * spec.input_scale * omega;
  }
  sys.C.resize(static_cast<Eigen::Index>(spec.outputs), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < sys.C.cols(); ++j) {
    for (Eigen::Index i = 0; i < sys.C.rows(); ++i) sys.C(i, j) = rng.normal();
  }

  for (int attempt = 0; attempt <= 5; ++attempt) {
    if (nonsingular_on_band(sys, spec.f_low, spec.f_high)) return sys;
    for (std::size_t i = 0; i < n; ++i) sys.A[0].add(i, i, -0.05 * omega);
  }
  throw Error(ErrorCode::SingularOnGrid, "synthetic system stays singular on the band after 5 shifts");
}

}  // namespace morgreed
