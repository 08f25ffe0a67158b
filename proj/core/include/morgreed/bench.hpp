#pragma once

// Benchmark harness: run configuration, method comparison and trace replay.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morgreed/greedy.hpp"
#include "morgreed/io.hpp"
#include "morgreed/synthetic.hpp"
#include "morgreed/system.hpp"

namespace morgreed {

struct GridSpec {
  double f_low = 1e6;
  double f_high = 2e10;
  std::size_t count = 2;
  Spacing spacing = Spacing::Linear;

  std::vector<FrequencyPoint> points() const { return make_grid(f_low, f_high, count, spacing); }
};

std::string_view to_string(Spacing spacing) noexcept;
Spacing parse_spacing(std::string_view text);

/// Everything a run or comparison needs. Field names double as JSON keys.
struct RunConfig {
  std::string model;                       // model file; empty means use `synthetic`
  std::optional<SyntheticSpec> synthetic;  // in-memory model when no file is given
  std::string mode = "standard";           // standard | bifidelity | multifidelity | all
  GridSpec xi{1e6, 2e10, 30, Spacing::Linear};
  GridSpec xi_c{1e6, 2e10, 10, Spacing::Linear};
  GridSpec xi_f{1e6, 2e10, 100, Spacing::Linear};
  GridSpec validation{1e6, 2e10, 1000, Spacing::Log};
  GreedyConfig greedy;                     // mode inside is overwritten per method
  std::string output_dir = ".";
  bool timing = false;                     // write wall times into logs and reports
  std::size_t threads = 1;

  /// Throws InvalidConfig / InvalidRange.
  void check() const;
  TrainingSets training_sets() const;
};

/// Desk benchmark: n = 500, d = 10, three inputs and outputs, tol 1e-3,
/// epsilon 0.1, |Xi| = 30, |Xi_c| = 10, |Xi_f| = 100, 1000 validation points.
RunConfig benchmark_config(std::uint64_t seed = 1);

std::string run_config_to_json(const RunConfig& config);
/// Values missing from `text` keep the ones in `base`.
RunConfig run_config_from_json(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

std::string synthetic_to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_from_json(std::string_view text, SyntheticSpec base = {});

/// Reads `model` or generates `synthetic`.
ParametricSystem load_system(const RunConfig& config);

struct MethodSpec {
  std::string label;
  GreedyMode mode = GreedyMode::Standard;
  SetPolicy policy = SetPolicy::AddOnly;
};

/// standard, bifidelity/multifidelity x add_only/add_remove.
std::vector<MethodSpec> comparison_methods();
MethodSpec method_for(GreedyMode mode, SetPolicy policy);

struct ReportRow {
  std::string method;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t fom_solves = 0;
  std::size_t estimator_evaluations = 0;
  std::size_t reduced_order = 0;
  double runtime_seconds = 0.0;
  double valid_err = 0.0;
  bool failed = false;  // the method threw instead of finishing
  std::string error;    // diagnostic for failed or unconverged rows
};

struct ComparisonReport {
  std::vector<ReportRow> rows;

  /// Runtime appears only when `include_runtime` is set.
  std::string to_csv(bool include_runtime = false) const;
  std::string to_json(bool include_runtime = false) const;
  const ReportRow* find(std::string_view method) const;
};

struct MethodRun {
  MethodSpec method;
  std::optional<GreedyResult> result;
  RunLog log;
  ReportRow row;
};

/// Runs one method on the configured training sets and validates its ROM.
MethodRun run_method(const ParametricSystem& sys, const RunConfig& config, const MethodSpec& method,
                     const ValidationReference& reference);

struct Comparison {
  ComparisonReport report;
  std::vector<MethodRun> runs;
};

/// Runs every method against one shared validation reference. Failed
/// methods keep a row with `error` set.
Comparison run_comparison(const ParametricSystem& sys, const RunConfig& config,
                          const std::vector<MethodSpec>& methods = comparison_methods());

struct TraceOptions {
  bool true_error = false;  // full-order solves over the evaluated set
  bool delta = false;       // true error and delta at the selected point
  std::size_t threads = 1;
};

struct TraceRow {
  std::size_t iteration = 0;
  double estimator_max = 0.0;
  std::optional<double> true_error_max;
  bool frozen = false;
  double selected_f = 0.0;
  std::optional<double> true_error_selected;
  std::optional<double> delta_selected;
};

struct SampleRow {
  std::size_t iteration = 0;
  std::string kind;  // snapshot | residual_snapshot | added | removed
  double f = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<SampleRow> samples;

  std::string rows_csv() const;
  std::string samples_csv() const;
};

/// Rebuilds V and V_r from the logged snapshots and re-evaluates the
/// estimator over each iteration's training set.
Trace trace_run(const ParametricSystem& sys, const RunLog& log, const TraceOptions& options = {});

/// %.17g, the CSV number format.
std::string format_number(double value);

}  // namespace morgreed
