#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "morgreed/system.hpp"

namespace morgreed {

/// Random sparse delay system with a handful of lightly damped modes inside
/// [f_low, f_high], fast real poles outside the band, and delayed couplings
/// that stay at least 10x below the undelayed terms.
struct SyntheticSpec {
  std::size_t order = 200;
  std::size_t delays = 5;           // d; the system has d + 1 terms per side
  std::size_t inputs = 1;
  std::size_t outputs = 1;
  double density = 0.01;            // off-diagonal fill of each sparse matrix
  double f_low = 1e6;
  double f_high = 2e10;
  std::size_t modes = 0;            // resonant modes in band; 0 picks min(order / 2, 16)
  double damping_min = 0.04;
  double damping_max = 0.12;
  double coupling = 0.01;           // undelayed off-diagonal strength relative to 2 pi f_high
  double delayed_ratio = 0.005;     // delayed entry strength relative to 2 pi f_high
  double max_delay = 1.0;           // tau_d <= max_delay / f_high
  double input_scale = 0.05;        // B entries relative to 2 pi f_high
  std::uint64_t seed = 1;

  void check() const;
};

/// Deterministic under `seed`. Throws SingularOnGrid when trial
/// factorizations at the band endpoints and midpoint keep failing after
/// five shifts of the diagonal.
DelaySystem generate_synthetic(const SyntheticSpec& spec);

/// std::mt19937_64 with hand-rolled conversions: the engine is bit-exact
/// across platforms, the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  std::size_t index(std::size_t n);      // [0, n)

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace morgreed
