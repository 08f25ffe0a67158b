#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morgreed/estimator.hpp"
#include "morgreed/rom.hpp"
#include "morgreed/system.hpp"

namespace morgreed {

enum class GreedyMode { Standard, Bifidelity, Multifidelity };
enum class SetPolicy { AddOnly, AddRemove };
enum class ErrorNormalization { Absolute, Relative };

std::string_view to_string(GreedyMode mode) noexcept;
std::string_view to_string(SetPolicy policy) noexcept;
std::string_view to_string(ErrorNormalization norm) noexcept;
GreedyMode parse_mode(std::string_view text);
SetPolicy parse_set_policy(std::string_view text);
ErrorNormalization parse_normalization(std::string_view text);

struct GreedyConfig {
  GreedyMode mode = GreedyMode::Standard;
  SetPolicy set_policy = SetPolicy::AddOnly;
  double tol = 1e-3;
  double epsilon = 0.1;  // multi-fidelity freeze threshold
  std::size_t n_add = 1;
  std::size_t n_del = 1;
  std::size_t max_iterations = 100;
  double rbf_shape = 30.0;
  bool rbf_log_coordinates = false;
  ErrorNormalization normalization = ErrorNormalization::Absolute;
  std::size_t initial_index = 0;     // position of the first mu* in the training set
  std::size_t min_coarse_size = 3;   // removals are suppressed below this size
  bool stagnation_guard = true;
  std::size_t threads = 1;           // workers for training-set sweeps

  /// Throws InvalidConfig.
  void check() const;
};

struct TrainingSets {
  std::vector<FrequencyPoint> xi;    // standard mode
  std::vector<FrequencyPoint> xi_c;  // coarse, mutable
  std::vector<FrequencyPoint> xi_f;  // fine, fixed
};

struct IterationRecord {
  std::size_t iteration = 0;
  double snapshot_f = 0.0;                         // mu* whose snapshot extended V
  std::optional<double> residual_snapshot_f;       // mu^r whose snapshot extended V_r
  double selected_f = 0.0;                         // next mu* (estimator argmax)
  std::optional<double> selected_residual_f;       // next mu^r
  std::vector<double> added;
  std::vector<double> removed;
  double epsilon = 0.0;                            // estimator value at the next mu*
  std::size_t evaluated_size = 0;                  // points swept by the estimator
  std::size_t coarse_size = 0;                     // training-set size after the update
  std::size_t fom_solves = 0;
  std::size_t cumulative_fom_solves = 0;
  std::size_t cumulative_estimator_evaluations = 0;
  std::size_t reduced_order = 0;
  std::size_t residual_order = 0;
  bool frozen = false;
  double wall_seconds = 0.0;
};

struct GreedyResult {
  GreedyMode mode = GreedyMode::Standard;
  ReducedModel rom;
  ResidualEstimator estimator;
  std::vector<IterationRecord> log;
  bool converged = false;
  std::size_t fom_solves = 0;
  std::size_t estimator_evaluations = 0;
  double runtime_seconds = 0.0;
  std::string diagnostic;                  // set when not converged
  std::vector<FrequencyPoint> training_set;  // final Xi or Xi_c
};

/// Greedy with the residual-system estimator over a fixed training set.
GreedyResult run_standard(const ParametricSystem& sys, std::span<const FrequencyPoint> xi, GreedyConfig config);

/// Greedy over a coarse set with an RBF surrogate swept over the fine set
/// to enrich (and optionally thin) the coarse set.
GreedyResult run_bifidelity(const ParametricSystem& sys, const TrainingSets& sets, GreedyConfig config);

/// Bi-fidelity plus a latch: once the estimator drops below config.epsilon
/// the auxiliary basis is frozen and no further residual snapshots are taken.
GreedyResult run_multifidelity(const ParametricSystem& sys, const TrainingSets& sets, GreedyConfig config);

/// Dispatches on config.mode (Standard uses sets.xi).
GreedyResult run_greedy(const ParametricSystem& sys, const TrainingSets& sets, const GreedyConfig& config);

struct ScoredPoint {
  FrequencyPoint point;
  double value = 0.0;
};

struct CoarseSetUpdate {
  TrainingSets sets;
  std::vector<FrequencyPoint> added;
  std::vector<FrequencyPoint> removed;
};

/// Admits additions whose surrogate value exceeds tol and removes points
/// whose estimator value is below tol (AddRemove only). Survivors keep their
/// order; `keep` is never removed; removals are dropped when the set would
/// shrink below `min_size`.
CoarseSetUpdate update_coarse_set(const TrainingSets& sets, std::span<const ScoredPoint> additions,
                                  std::span<const ScoredPoint> removals, SetPolicy policy, double tol,
                                  const FrequencyPoint* keep = nullptr, std::size_t min_size = 3);

/// Full-order transfer functions on a validation grid, computed once and
/// shared between ROMs.
class ValidationReference {
 public:
  ValidationReference(const ParametricSystem& sys, std::vector<FrequencyPoint> grid, SolveCounter* counter = nullptr,
                      std::size_t threads = 1);

  const std::vector<FrequencyPoint>& grid() const noexcept { return grid_; }
  const std::vector<ComplexMatrix>& transfers() const noexcept { return transfers_; }

 private:
  std::vector<FrequencyPoint> grid_;
  std::vector<ComplexMatrix> transfers_;
};

/// max over the grid of output_error; counts one solve per grid point.
double validate(const ParametricSystem& sys, const ReducedModel& rom, std::span<const FrequencyPoint> grid,
                SolveCounter* counter = nullptr, std::size_t threads = 1);
double validate(const ValidationReference& reference, const ReducedModel& rom, std::size_t threads = 1);

}  // namespace morgreed
