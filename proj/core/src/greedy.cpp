#include "morgreed/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "morgreed/error.hpp"
#include "morgreed/parallel.hpp"
#include "morgreed/surrogate.hpp"

namespace morgreed {

std::string_view to_string(GreedyMode mode) noexcept {
  switch (mode) {
    case GreedyMode::Standard: return "standard";
    case GreedyMode::Bifidelity: return "bifidelity";
    case GreedyMode::Multifidelity: return "multifidelity";
  }
  return "standard";
}

std::string_view to_string(SetPolicy policy) noexcept {
  return policy == SetPolicy::AddOnly ? "add_only" : "add_remove";
}

std::string_view to_string(ErrorNormalization norm) noexcept {
  return norm == ErrorNormalization::Absolute ? "absolute" : "relative";
}

GreedyMode parse_mode(std::string_view text) {
  if (text == "standard") return GreedyMode::Standard;
  if (text == "bifidelity") return GreedyMode::Bifidelity;
  if (text == "multifidelity") return GreedyMode::Multifidelity;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(text) + "'");
}

SetPolicy parse_set_policy(std::string_view text) {
  if (text == "add_only" || text == "add-only") return SetPolicy::AddOnly;
  if (text == "add_remove" || text == "add-remove") return SetPolicy::AddRemove;
  throw Error(ErrorCode::InvalidConfig, "unknown set policy '" + std::string(text) + "'");
}

ErrorNormalization parse_normalization(std::string_view text) {
  if (text == "absolute") return ErrorNormalization::Absolute;
  if (text == "relative") return ErrorNormalization::Relative;
  throw Error(ErrorCode::InvalidConfig, "unknown normalization '" + std::string(text) + "'");
}

void GreedyConfig::check() const {
  if (!(tol > 0.0) || !(tol < 1.0)) throw Error(ErrorCode::InvalidConfig, "tol must lie in (0, 1)");
  if (mode == GreedyMode::Multifidelity && !(epsilon > tol && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must satisfy tol < epsilon < 1");
  }
  if (max_iterations == 0) throw Error(ErrorCode::InvalidConfig, "max_iterations must be positive");
  if (!(rbf_shape > 0.0)) throw Error(ErrorCode::InvalidConfig, "rbf shape must be positive");
}

namespace {

bool contains(std::span<const FrequencyPoint> set, const FrequencyPoint& p) {
  return std::any_of(set.begin(), set.end(), [&](const FrequencyPoint& q) { return same_frequency(p, q); });
}

// Index of the largest value; the lowest index wins ties.
std::size_t argmax(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// Indices of the `count` smallest values, ascending, ties to the lowest index.
std::vector<std::size_t> smallest(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

class Driver {
 public:
  Driver(const ParametricSystem& sys, const TrainingSets& sets, const GreedyConfig& config)
      : sys_(sys), config_(config), v_(sys.order()), estimator_(sys.order()) {
    config_.check();
    standard_ = config_.mode == GreedyMode::Standard;
    active_ = standard_ ? sets.xi : sets.xi_c;
    if (active_.size() < 2) throw Error(ErrorCode::InvalidConfig, "training set needs at least two points");
    if (config_.initial_index >= active_.size()) throw Error(ErrorCode::InvalidConfig, "initial index out of range");
    if (!standard_) {
      fine_ = sets.xi_f;
      if (fine_.size() < active_.size()) throw Error(ErrorCode::InvalidConfig, "|Xi_f| must be at least |Xi_c|");
      double lo = active_.front().f;
      double hi = lo;
      for (const auto* set : {&active_, &fine_}) {
        for (const auto& p : *set) {
          lo = std::min(lo, p.f);
          hi = std::max(hi, p.f);
        }
      }
      coords_ = CoordinateMap{lo, hi, config_.rbf_log_coordinates};
      fine_coords_.reserve(fine_.size());
      for (const auto& p : fine_) fine_coords_.push_back(coords_(p.f));
    }
  }

  GreedyResult run() {
    const auto start = std::chrono::steady_clock::now();
    GreedyResult result;
    result.mode = config_.mode;

    FrequencyPoint star = active_[config_.initial_index];
    FrequencyPoint residual_point = active_[config_.initial_index == 0 ? 1 : 0];
    std::size_t stalled = 0;
    double previous_epsilon = 0.0;
    ReducedModel rom;

    for (std::size_t it = 1; it <= config_.max_iterations; ++it) {
      const auto iter_start = std::chrono::steady_clock::now();
      const std::size_t solves_before = solves_.count();
      IterationRecord rec;
      rec.iteration = it;
      rec.snapshot_f = star.f;

      v_ = orth_extend(v_, solve_fom(sys_, star, &solves_));
      if (!estimator_.frozen()) {
        estimator_ = estimator_.update_vr(sys_, v_, residual_point, &solves_);
        rec.residual_snapshot_f = residual_point.f;
      }
      rom = project(sys_, v_);

      const bool want_residual = !estimator_.frozen();
      const std::vector<EstimatePoint> sweep = evaluate(rom, want_residual);
      evaluations_ += sweep.size();

      std::vector<double> values(sweep.size());
      for (std::size_t i = 0; i < sweep.size(); ++i) values[i] = sweep[i].estimate;
      normalize(rom, values);

      const std::size_t i_star = argmax(values);
      const FrequencyPoint next_star = active_[i_star];
      const double epsilon = values[i_star];
      std::optional<FrequencyPoint> next_residual;
      if (want_residual) {
        std::vector<double> norms(sweep.size());
        for (std::size_t i = 0; i < sweep.size(); ++i) norms[i] = sweep[i].residual_norm;
        next_residual = active_[argmax(norms)];
      }

      rec.evaluated_size = active_.size();
      if (!standard_) update_training_set(values, next_star, rec);
      rec.coarse_size = active_.size();

      rec.selected_f = next_star.f;
      if (next_residual) rec.selected_residual_f = next_residual->f;
      rec.epsilon = epsilon;
      if (config_.mode == GreedyMode::Multifidelity && !estimator_.frozen() && epsilon < config_.epsilon) {
        estimator_.freeze();
      }
      rec.frozen = estimator_.frozen();
      rec.fom_solves = solves_.count() - solves_before;
      rec.cumulative_fom_solves = solves_.count();
      rec.cumulative_estimator_evaluations = evaluations_;
      rec.reduced_order = v_.size();
      rec.residual_order = estimator_.basis().size();
      rec.wall_seconds = seconds_since(iter_start);
      result.log.push_back(rec);

      if (epsilon <= config_.tol) {
        result.converged = true;
        break;
      }
      if (config_.stagnation_guard) {
        const bool repeat = same_frequency(next_star, star) && !(epsilon < 0.99 * previous_epsilon);
        stalled = repeat ? stalled + 1 : 0;
        if (stalled >= 3) {
          result.diagnostic = "stagnation: mu* repeated without 1% estimator decrease for 3 iterations";
          break;
        }
      }
      previous_epsilon = epsilon;
      star = next_star;
      if (next_residual) residual_point = *next_residual;
    }

    if (!result.converged && result.diagnostic.empty()) {
      result.diagnostic = "max_iterations (" + std::to_string(config_.max_iterations) + ") reached";
    }
    result.rom = std::move(rom);
    result.estimator = estimator_;
    result.fom_solves = solves_.count();
    result.estimator_evaluations = evaluations_;
    result.training_set = active_;
    result.runtime_seconds = seconds_since(start);
    return result;
  }

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  }

  std::vector<EstimatePoint> evaluate(const ReducedModel& rom, bool with_residual) const {
    const BoundEstimator bound(sys_, rom, estimator_);
    std::vector<EstimatePoint> out(active_.size());
    parallel_for(active_.size(), config_.threads,
                 [&](std::size_t i) { out[i] = bound.evaluate(active_[i], with_residual); });
    return out;
  }

  void normalize(const ReducedModel& rom, std::vector<double>& values) const {
    if (config_.normalization != ErrorNormalization::Relative) return;
    double scale = 0.0;
    for (const auto& p : active_) scale = std::max(scale, max_abs(reduced_transfer(rom, p)));
    if (scale > 0.0) {
      for (auto& v : values) v /= scale;
    }
  }

  void update_training_set(const std::vector<double>& values, const FrequencyPoint& next_star,
                           IterationRecord& rec) {
    std::vector<double> centers;
    centers.reserve(active_.size());
    for (const auto& p : active_) centers.push_back(coords_(p.f));
    std::vector<double> fit_values(values.begin(), values.end());
    const RbfSurrogate sur = rbf_fit(centers, fit_values, config_.rbf_shape);

    std::vector<ScoredPoint> additions;
    for (const auto& c : select_candidates(sur, fine_coords_, config_.n_add, centers)) {
      additions.push_back({fine_[c.index], c.value});
    }
    std::vector<ScoredPoint> removals;
    if (config_.set_policy == SetPolicy::AddRemove) {
      for (std::size_t i : smallest(values, config_.n_del)) removals.push_back({active_[i], values[i]});
    }

    TrainingSets sets;
    sets.xi_c = active_;
    CoarseSetUpdate update = update_coarse_set(sets, additions, removals, config_.set_policy, config_.tol,
                                               &next_star, config_.min_coarse_size);
    for (const auto& p : update.added) rec.added.push_back(p.f);
    for (const auto& p : update.removed) rec.removed.push_back(p.f);
    active_ = std::move(update.sets.xi_c);
    if (active_.empty()) throw Error(ErrorCode::EmptyCoarseSet, "coarse training set exhausted");
  }

  const ParametricSystem& sys_;
  GreedyConfig config_;
  bool standard_ = true;
  std::vector<FrequencyPoint> active_;
  std::vector<FrequencyPoint> fine_;
  std::vector<double> fine_coords_;
  CoordinateMap coords_;
  BasisMatrix v_;
  ResidualEstimator estimator_;
  SolveCounter solves_;
  std::size_t evaluations_ = 0;
};

}  // namespace

GreedyResult run_greedy(const ParametricSystem& sys, const TrainingSets& sets, const GreedyConfig& config) {
  return Driver(sys, sets, config).run();
}

GreedyResult run_standard(const ParametricSystem& sys, std::span<const FrequencyPoint> xi, GreedyConfig config) {
  config.mode = GreedyMode::Standard;
  TrainingSets sets;
  sets.xi.assign(xi.begin(), xi.end());
  return run_greedy(sys, sets, config);
}

GreedyResult run_bifidelity(const ParametricSystem& sys, const TrainingSets& sets, GreedyConfig config) {
  config.mode = GreedyMode::Bifidelity;
  return run_greedy(sys, sets, config);
}

GreedyResult run_multifidelity(const ParametricSystem& sys, const TrainingSets& sets, GreedyConfig config) {
  config.mode = GreedyMode::Multifidelity;
  return run_greedy(sys, sets, config);
}

CoarseSetUpdate update_coarse_set(const TrainingSets& sets, std::span<const ScoredPoint> additions,
                                  std::span<const ScoredPoint> removals, SetPolicy policy, double tol,
                                  const FrequencyPoint* keep, std::size_t min_size) {
  CoarseSetUpdate out;
  out.sets = sets;
  auto& coarse = out.sets.xi_c;

  for (const auto& a : additions) {
    if (!(a.value > tol) || contains(coarse, a.point) || contains(out.added, a.point)) continue;
    out.added.push_back(a.point);
  }
  if (policy == SetPolicy::AddRemove) {
    for (const auto& r : removals) {
      if (!(r.value < tol) || !contains(coarse, r.point) || contains(out.removed, r.point)) continue;
      if (keep != nullptr && same_frequency(*keep, r.point)) continue;
      out.removed.push_back(r.point);
    }
    if (coarse.size() + out.added.size() < min_size + out.removed.size()) out.removed.clear();
  }

  std::erase_if(coarse, [&](const FrequencyPoint& p) { return contains(out.removed, p); });
  coarse.insert(coarse.end(), out.added.begin(), out.added.end());
  return out;
}

ValidationReference::ValidationReference(const ParametricSystem& sys, std::vector<FrequencyPoint> grid,
                                         SolveCounter* counter, std::size_t threads)
    : grid_(std::move(grid)), transfers_(grid_.size()) {
  parallel_for(grid_.size(), threads, [&](std::size_t i) { transfers_[i] = transfer_function(sys, grid_[i], counter); });
}

double validate(const ValidationReference& reference, const ReducedModel& rom, std::size_t threads) {
  const auto& grid = reference.grid();
  std::vector<double> errors(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { errors[i] = output_error(reference.transfers()[i], rom, grid[i]); });
  return errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
}

double validate(const ParametricSystem& sys, const ReducedModel& rom, std::span<const FrequencyPoint> grid,
                SolveCounter* counter, std::size_t threads) {
  const ValidationReference reference(sys, std::vector<FrequencyPoint>(grid.begin(), grid.end()), counter, threads);
  return validate(reference, rom, threads);
}

}  // namespace morgreed
