#include "morgreed/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "detail/json_util.hpp"
#include "morgreed/error.hpp"
#include "morgreed/parallel.hpp"

namespace morgreed {

using detail::Json;

std::string_view to_string(Spacing spacing) noexcept { return spacing == Spacing::Linear ? "linear" : "log"; }

Spacing parse_spacing(std::string_view text) {
  if (text == "linear" || text == "linspace") return Spacing::Linear;
  if (text == "log" || text == "logspace") return Spacing::Log;
  throw Error(ErrorCode::InvalidConfig, "unknown spacing '" + std::string(text) + "'");
}

void RunConfig::check() const {
  if (model.empty() && !synthetic) throw Error(ErrorCode::InvalidConfig, "need a model file or a synthetic spec");
  if (mode != "all") parse_mode(mode);
  for (const GridSpec* g : {&xi, &xi_c, &xi_f, &validation}) {
    if (!(g->f_low > 0.0) || !(g->f_high > g->f_low) || g->count < 2) {
      throw Error(ErrorCode::InvalidRange, "grid specs need 0 < f_low < f_high and count >= 2");
    }
  }
  GreedyConfig c = greedy;
  c.mode = GreedyMode::Multifidelity;
  c.check();
  if (synthetic) synthetic->check();
}

TrainingSets RunConfig::training_sets() const {
  TrainingSets sets;
  sets.xi = xi.points();
  sets.xi_c = xi_c.points();
  sets.xi_f = xi_f.points();
  return sets;
}

RunConfig benchmark_config(std::uint64_t seed) {
  RunConfig config;
  SyntheticSpec spec;
  spec.order = 500;
  spec.delays = 10;
  spec.inputs = 3;
  spec.outputs = 3;
  spec.seed = seed;
  config.synthetic = spec;
  config.mode = "all";
  config.greedy.tol = 1e-3;
  config.greedy.epsilon = 0.1;
  return config;
}

namespace {

Json grid_json(const GridSpec& g) {
  return Json{{"f_low", g.f_low}, {"f_high", g.f_high}, {"count", g.count}, {"spacing", to_string(g.spacing)}};
}

void grid_from(const Json& j, GridSpec& g) {
  g.f_low = j.value("f_low", g.f_low);
  g.f_high = j.value("f_high", g.f_high);
  g.count = j.value("count", g.count);
  if (j.contains("spacing")) g.spacing = parse_spacing(j.at("spacing").get<std::string>());
}

Json synthetic_json(const SyntheticSpec& s) {
  return Json{{"order", s.order},
              {"delays", s.delays},
              {"inputs", s.inputs},
              {"outputs", s.outputs},
              {"density", s.density},
              {"f_low", s.f_low},
              {"f_high", s.f_high},
              {"modes", s.modes},
              {"damping_min", s.damping_min},
              {"damping_max", s.damping_max},
              {"coupling", s.coupling},
              {"delayed_ratio", s.delayed_ratio},
              {"max_delay", s.max_delay},
              {"input_scale", s.input_scale},
              {"seed", s.seed}};
}

void synthetic_from(const Json& j, SyntheticSpec& s) {
  s.order = j.value("order", s.order);
  s.delays = j.value("delays", s.delays);
  s.inputs = j.value("inputs", s.inputs);
  s.outputs = j.value("outputs", s.outputs);
  s.density = j.value("density", s.density);
  s.f_low = j.value("f_low", s.f_low);
  s.f_high = j.value("f_high", s.f_high);
  s.modes = j.value("modes", s.modes);
  s.damping_min = j.value("damping_min", s.damping_min);
  s.damping_max = j.value("damping_max", s.damping_max);
  s.coupling = j.value("coupling", s.coupling);
  s.delayed_ratio = j.value("delayed_ratio", s.delayed_ratio);
  s.max_delay = j.value("max_delay", s.max_delay);
  s.input_scale = j.value("input_scale", s.input_scale);
  s.seed = j.value("seed", s.seed);
}

Json parse_config(std::string_view text) {
  try {
    Json j = Json::parse(text.begin(), text.end());
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "run config must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed run config: ") + e.what());
  }
}

}  // namespace

// output_dir and threads are left out so that logs do not depend on where
// or how wide a run executes.
std::string run_config_to_json(const RunConfig& c) {
  Json j;
  j["model"] = c.model;
  j["synthetic"] = c.synthetic ? synthetic_json(*c.synthetic) : Json(nullptr);
  j["mode"] = c.mode;
  j["xi"] = grid_json(c.xi);
  j["xi_c"] = grid_json(c.xi_c);
  j["xi_f"] = grid_json(c.xi_f);
  j["validation"] = grid_json(c.validation);
  j["tol"] = c.greedy.tol;
  j["epsilon"] = c.greedy.epsilon;
  j["n_add"] = c.greedy.n_add;
  j["n_del"] = c.greedy.n_del;
  j["set_policy"] = to_string(c.greedy.set_policy);
  j["max_iterations"] = c.greedy.max_iterations;
  j["rbf_shape"] = c.greedy.rbf_shape;
  j["rbf_log_coordinates"] = c.greedy.rbf_log_coordinates;
  j["normalization"] = to_string(c.greedy.normalization);
  j["initial_index"] = c.greedy.initial_index;
  j["min_coarse_size"] = c.greedy.min_coarse_size;
  j["stagnation_guard"] = c.greedy.stagnation_guard;
  j["timing"] = c.timing;
  return j.dump();
}

RunConfig run_config_from_json(std::string_view text, RunConfig c) {
  const Json j = parse_config(text);
  try {
    c.model = j.value("model", c.model);
    if (j.contains("synthetic")) {
      if (j.at("synthetic").is_null()) {
        c.synthetic.reset();
      } else {
        SyntheticSpec s = c.synthetic.value_or(SyntheticSpec{});
        synthetic_from(j.at("synthetic"), s);
        c.synthetic = s;
      }
    }
    c.mode = j.value("mode", c.mode);
    if (j.contains("xi")) grid_from(j.at("xi"), c.xi);
    if (j.contains("xi_c")) grid_from(j.at("xi_c"), c.xi_c);
    if (j.contains("xi_f")) grid_from(j.at("xi_f"), c.xi_f);
    if (j.contains("validation")) grid_from(j.at("validation"), c.validation);
    c.greedy.tol = j.value("tol", c.greedy.tol);
    c.greedy.epsilon = j.value("epsilon", c.greedy.epsilon);
    c.greedy.n_add = j.value("n_add", c.greedy.n_add);
    c.greedy.n_del = j.value("n_del", c.greedy.n_del);
    if (j.contains("set_policy")) c.greedy.set_policy = parse_set_policy(j.at("set_policy").get<std::string>());
    c.greedy.max_iterations = j.value("max_iterations", c.greedy.max_iterations);
    c.greedy.rbf_shape = j.value("rbf_shape", c.greedy.rbf_shape);
    c.greedy.rbf_log_coordinates = j.value("rbf_log_coordinates", c.greedy.rbf_log_coordinates);
    if (j.contains("normalization")) {
      c.greedy.normalization = parse_normalization(j.at("normalization").get<std::string>());
    }
    c.greedy.initial_index = j.value("initial_index", c.greedy.initial_index);
    c.greedy.min_coarse_size = j.value("min_coarse_size", c.greedy.min_coarse_size);
    c.greedy.stagnation_guard = j.value("stagnation_guard", c.greedy.stagnation_guard);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.timing = j.value("timing", c.timing);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("run config field error: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  return run_config_from_json(read_text(path, ErrorCode::InvalidConfig), std::move(base));
}

std::string synthetic_to_json(const SyntheticSpec& spec) { return synthetic_json(spec).dump(); }

SyntheticSpec synthetic_from_json(std::string_view text, SyntheticSpec base) {
  const Json j = parse_config(text);
  try {
    synthetic_from(j, base);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("synthetic spec field error: ") + e.what());
  }
  return base;
}

ParametricSystem load_system(const RunConfig& config) {
  if (!config.model.empty()) return read_model(config.model);
  if (!config.synthetic) throw Error(ErrorCode::InvalidConfig, "need a model file or a synthetic spec");
  return ParametricSystem(generate_synthetic(*config.synthetic));
}

MethodSpec method_for(GreedyMode mode, SetPolicy policy) {
  if (mode == GreedyMode::Standard) return {"standard", mode, SetPolicy::AddOnly};
  return {std::string(to_string(mode)) + "_" + std::string(to_string(policy)), mode, policy};
}

std::vector<MethodSpec> comparison_methods() {
  return {method_for(GreedyMode::Standard, SetPolicy::AddOnly),
          method_for(GreedyMode::Bifidelity, SetPolicy::AddOnly),
          method_for(GreedyMode::Bifidelity, SetPolicy::AddRemove),
          method_for(GreedyMode::Multifidelity, SetPolicy::AddOnly),
          method_for(GreedyMode::Multifidelity, SetPolicy::AddRemove)};
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string ComparisonReport::to_csv(bool include_runtime) const {
  std::ostringstream out;
  out << "method,converged,iterations,fom_solves,estimator_evaluations,reduced_order,valid_err";
  if (include_runtime) out << ",runtime_seconds";
  out << ",error\n";
  for (const auto& r : rows) {
    out << csv_field(r.method) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << r.fom_solves << ','
        << r.estimator_evaluations << ',' << r.reduced_order << ',' << format_number(r.valid_err);
    if (include_runtime) out << ',' << format_number(r.runtime_seconds);
    out << ',' << csv_field(r.error) << '\n';
  }
  return out.str();
}

std::string ComparisonReport::to_json(bool include_runtime) const {
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    Json j{{"method", r.method},
           {"converged", r.converged},
           {"iterations", r.iterations},
           {"fom_solves", r.fom_solves},
           {"estimator_evaluations", r.estimator_evaluations},
           {"reduced_order", r.reduced_order},
           {"valid_err", r.valid_err}};
    if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
    j["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    rows_json.push_back(std::move(j));
  }
  return Json{{"rows", std::move(rows_json)}}.dump(2) + "\n";
}

const ReportRow* ComparisonReport::find(std::string_view method) const {
  for (const auto& r : rows) {
    if (r.method == method) return &r;
  }
  return nullptr;
}

MethodRun run_method(const ParametricSystem& sys, const RunConfig& config, const MethodSpec& method,
                     const ValidationReference& reference) {
  MethodRun run;
  run.method = method;
  run.row.method = method.label;

  GreedyConfig greedy = config.greedy;
  greedy.mode = method.mode;
  greedy.set_policy = method.policy;
  greedy.threads = config.threads;

  run.log.header.method = method.label;
  run.log.header.model = config.model.empty() ? "synthetic" : config.model;
  run.log.header.config = greedy;
  run.log.header.run_config = run_config_to_json(config);
  const TrainingSets sets = config.training_sets();
  if (method.mode == GreedyMode::Standard) {
    run.log.header.sets.xi = sets.xi;
  } else {
    run.log.header.sets.xi_c = sets.xi_c;
    run.log.header.sets.xi_f = sets.xi_f;
  }

  try {
    GreedyResult result = run_greedy(sys, sets, greedy);
    run.log.records = result.log;
    run.row.converged = result.converged;
    run.row.iterations = result.log.size();
    run.row.fom_solves = result.fom_solves;
    run.row.estimator_evaluations = result.estimator_evaluations;
    run.row.reduced_order = result.rom.order();
    run.row.runtime_seconds = result.runtime_seconds;
    run.row.valid_err = validate(reference, result.rom, config.threads);
    if (!result.converged) run.row.error = result.diagnostic;
    run.result = std::move(result);
  } catch (const Error& e) {
    run.row.failed = true;
    run.row.error = e.what();
  }
  return run;
}

Comparison run_comparison(const ParametricSystem& sys, const RunConfig& config,
                          const std::vector<MethodSpec>& methods) {
  const ValidationReference reference(sys, config.validation.points(), nullptr, config.threads);
  Comparison out;
  for (const auto& m : methods) {
    out.runs.push_back(run_method(sys, config, m, reference));
    out.report.rows.push_back(out.runs.back().row);
  }
  return out;
}

namespace {

bool same_f(double a, double b) { return same_frequency(FrequencyPoint::from_hz(a), FrequencyPoint::from_hz(b)); }

}  // namespace

Trace trace_run(const ParametricSystem& sys, const RunLog& log, const TraceOptions& options) {
  const GreedyConfig& config = log.header.config;
  const bool standard = config.mode == GreedyMode::Standard;
  std::vector<FrequencyPoint> active = standard ? log.header.sets.xi : log.header.sets.xi_c;
  if (active.empty()) throw Error(ErrorCode::MissingLog, "run log header has no training set");

  Trace trace;
  BasisMatrix v(sys.order());
  ResidualEstimator estimator(sys.order());
  for (const auto& rec : log.records) {
    v = orth_extend(v, solve_fom(sys, FrequencyPoint::from_hz(rec.snapshot_f)));
    if (rec.residual_snapshot_f) {
      estimator = estimator.update_vr(sys, v, FrequencyPoint::from_hz(*rec.residual_snapshot_f));
    }
    const ReducedModel rom = project(sys, v);
    const BoundEstimator bound(sys, rom, estimator);

    std::vector<double> values(active.size());
    parallel_for(active.size(), options.threads, [&](std::size_t i) { values[i] = bound.estimate(active[i]); });
    double scale = 1.0;
    if (config.normalization == ErrorNormalization::Relative) {
      double m = 0.0;
      for (const auto& p : active) m = std::max(m, max_abs(reduced_transfer(rom, p)));
      if (m > 0.0) scale = m;
    }

    TraceRow row;
    row.iteration = rec.iteration;
    row.estimator_max = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()) / scale;
    row.frozen = rec.frozen;
    row.selected_f = rec.selected_f;
    if (options.true_error) {
      std::vector<double> errors(active.size());
      parallel_for(active.size(), options.threads, [&](std::size_t i) { errors[i] = output_error(sys, rom, active[i]); });
      row.true_error_max = *std::max_element(errors.begin(), errors.end()) / scale;
    }
    if (options.delta) {
      const FrequencyPoint p = FrequencyPoint::from_hz(rec.selected_f);
      row.true_error_selected = output_error(sys, rom, p) / scale;
      row.delta_selected = delta_diagnostic(estimator, sys, rom, p) / scale;
    }
    trace.rows.push_back(row);

    trace.samples.push_back({rec.iteration, "snapshot", rec.snapshot_f});
    if (rec.residual_snapshot_f) trace.samples.push_back({rec.iteration, "residual_snapshot", *rec.residual_snapshot_f});
    for (double f : rec.added) trace.samples.push_back({rec.iteration, "added", f});
    for (double f : rec.removed) trace.samples.push_back({rec.iteration, "removed", f});

    std::erase_if(active, [&](const FrequencyPoint& p) {
      return std::any_of(rec.removed.begin(), rec.removed.end(), [&](double f) { return same_f(p.f, f); });
    });
    for (double f : rec.added) active.push_back(FrequencyPoint::from_hz(f));
    if (rec.frozen && !estimator.frozen()) estimator.freeze();
  }
  return trace;
}

std::string Trace::rows_csv() const {
  std::ostringstream out;
  out << "iteration,estimator_max,true_error_max,frozen,selected_f,true_error_selected,delta_selected\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    out << r.iteration << ',' << format_number(r.estimator_max) << ',' << opt(r.true_error_max) << ','
        << (r.frozen ? 1 : 0) << ',' << format_number(r.selected_f) << ',' << opt(r.true_error_selected) << ','
        << opt(r.delta_selected) << '\n';
  }
  return out.str();
}

std::string Trace::samples_csv() const {
  std::ostringstream out;
  out << "iteration,kind,f\n";
  for (const auto& s : samples) out << s.iteration << ',' << s.kind << ',' << format_number(s.f) << '\n';
  return out.str();
}

}  // namespace morgreed
