// morgreed: command-line front end for the greedy model reduction library.
//
// Exit codes: 0 success / converged, 2 not converged, 1 error. Errors and
// non-convergence end with one JSON object on stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "morgreed/bench.hpp"
#include "morgreed/error.hpp"
#include "morgreed/io.hpp"
#include "morgreed/parallel.hpp"
#include "morgreed/synthetic.hpp"

namespace fs = std::filesystem;
using morgreed::Error;
using morgreed::RunConfig;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

void report_error(std::string_view code, std::string_view message) {
  nlohmann::ordered_json j{{"status", "error"}, {"error", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

// Flags that override a run config. Only flags given on the command line
// are applied, so config-file values survive.
struct RunFlags {
  std::string config;
  std::string model;
  std::string mode;
  std::optional<double> tol, epsilon, rbf_shape, f_low, f_high;
  std::optional<std::size_t> n_add, n_del, max_iterations, initial_index;
  std::optional<std::size_t> xi_count, xi_c_count, xi_f_count, validation_count;
  std::string set_policy, normalization, spacing, validation_spacing;
  std::optional<std::uint64_t> seed;
  bool benchmark = false;
  bool rbf_log = false;
  bool timing = false;
  std::string output_dir;

  void attach(CLI::App& app, bool with_mode) {
    app.add_option("-c,--config", config, "JSON run config; flags override its values")->check(CLI::ExistingFile);
    app.add_option("-m,--model", model, "model file (morgreed-delay-v1 or morgreed-affine-v1)");
    app.add_flag("--benchmark", benchmark, "start from the desk benchmark (n=500, d=10, 3x3, seeded synthetic)");
    if (with_mode) app.add_option("--mode", mode, "standard | bifidelity | multifidelity");
    app.add_option("--tol", tol, "greedy tolerance");
    app.add_option("--epsilon", epsilon, "multi-fidelity freeze threshold");
    app.add_option("--n-add", n_add, "fine-set samples proposed per iteration");
    app.add_option("--n-del", n_del, "coarse-set samples proposed for removal per iteration");
    app.add_option("--set-policy", set_policy, "add_only | add_remove");
    app.add_option("--rbf-shape", rbf_shape, "IMQ shape parameter");
    app.add_flag("--rbf-log", rbf_log, "fit the surrogate in log10 f instead of f");
    app.add_option("--normalization", normalization, "absolute | relative");
    app.add_option("--max-iterations", max_iterations);
    app.add_option("--initial-index", initial_index, "position of the first snapshot in the training set");
    app.add_option("--f-low", f_low, "lower band edge in Hz for all grids");
    app.add_option("--f-high", f_high, "upper band edge in Hz for all grids");
    app.add_option("--xi-count", xi_count, "|Xi| for the standard greedy");
    app.add_option("--xi-c-count", xi_c_count, "initial |Xi_c|");
    app.add_option("--xi-f-count", xi_f_count, "|Xi_f|");
    app.add_option("--validation-count", validation_count, "held-out validation points");
    app.add_option("--spacing", spacing, "training grid spacing: linear | log");
    app.add_option("--validation-spacing", validation_spacing, "validation grid spacing: linear | log");
    app.add_option("--seed", seed, "seed of the synthetic model");
    app.add_flag("--timing", timing, "write wall-clock times into logs and reports");
    app.add_option("-o,--output-dir", output_dir, "directory for logs, ROMs and reports");
  }

  RunConfig resolve() const {
    RunConfig c = benchmark ? morgreed::benchmark_config() : RunConfig{};
    if (!benchmark) c.mode = "standard";
    if (!config.empty()) c = morgreed::load_run_config(config, c);
    if (!model.empty()) {
      c.model = model;
      c.synthetic.reset();
    }
    if (!mode.empty()) c.mode = mode;
    if (tol) c.greedy.tol = *tol;
    if (epsilon) c.greedy.epsilon = *epsilon;
    if (n_add) c.greedy.n_add = *n_add;
    if (n_del) c.greedy.n_del = *n_del;
    if (!set_policy.empty()) c.greedy.set_policy = morgreed::parse_set_policy(set_policy);
    if (rbf_shape) c.greedy.rbf_shape = *rbf_shape;
    if (rbf_log) c.greedy.rbf_log_coordinates = true;
    if (!normalization.empty()) c.greedy.normalization = morgreed::parse_normalization(normalization);
    if (max_iterations) c.greedy.max_iterations = *max_iterations;
    if (initial_index) c.greedy.initial_index = *initial_index;
    for (auto* g : {&c.xi, &c.xi_c, &c.xi_f, &c.validation}) {
      if (f_low) g->f_low = *f_low;
      if (f_high) g->f_high = *f_high;
    }
    if (xi_count) c.xi.count = *xi_count;
    if (xi_c_count) c.xi_c.count = *xi_c_count;
    if (xi_f_count) c.xi_f.count = *xi_f_count;
    if (validation_count) c.validation.count = *validation_count;
    if (!spacing.empty()) {
      const auto s = morgreed::parse_spacing(spacing);
      c.xi.spacing = c.xi_c.spacing = c.xi_f.spacing = s;
    }
    if (!validation_spacing.empty()) c.validation.spacing = morgreed::parse_spacing(validation_spacing);
    if (seed) {
      if (!c.synthetic) throw Error(morgreed::ErrorCode::InvalidConfig, "--seed needs a synthetic model");
      c.synthetic->seed = *seed;
    }
    if (timing) c.timing = true;
    if (!output_dir.empty()) c.output_dir = output_dir;
    c.threads = morgreed::threads_from_env();
    c.check();
    return c;
  }
};

void write_outputs(const RunConfig& config, const morgreed::MethodRun& run) {
  const fs::path dir = config.output_dir;
  morgreed::write_run_log(dir / (run.method.label + ".jsonl"), run.log, config.timing);
  if (run.result) morgreed::write_rom(dir / (run.method.label + ".rom.json"), run.result->rom);
}

void print_rows(const morgreed::ComparisonReport& report) {
  std::printf("%-26s %5s %5s %6s %5s %13s %10s\n", "method", "conv", "iter", "solves", "r", "valid_err", "runtime_s");
  for (const auto& r : report.rows) {
    std::printf("%-26s %5s %5zu %6zu %5zu %13.6e %10.3f\n", r.method.c_str(), r.converged ? "yes" : "no",
                r.iterations, r.fom_solves, r.reduced_order, r.valid_err, r.runtime_seconds);
  }
}

// Failed rows outrank unconverged ones.
int finish(const morgreed::ComparisonReport& report) {
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  nlohmann::ordered_json unconverged = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    if (r.failed) {
      failed.push_back({{"method", r.method}, {"message", r.error}});
    } else if (!r.converged) {
      unconverged.push_back({{"method", r.method}, {"diagnostic", r.error}});
    }
  }
  if (!failed.empty()) {
    std::cerr << nlohmann::ordered_json{{"status", "error"}, {"error", "MethodFailed"}, {"rows", failed}}.dump() << '\n';
    return kExitError;
  }
  if (!unconverged.empty()) {
    std::cerr << nlohmann::ordered_json{{"status", "not_converged"}, {"error", "NotConverged"}, {"rows", unconverged}}.dump()
              << '\n';
    return kExitNotConverged;
  }
  return kExitConverged;
}

int cmd_generate(const morgreed::SyntheticSpec& spec, const std::string& output) {
  const morgreed::ParametricSystem sys(morgreed::generate_synthetic(spec));
  morgreed::write_model(output, sys);
  std::printf("wrote %s (n=%zu, d=%zu, inputs=%zu, outputs=%zu)\n", output.c_str(), sys.order(),
              sys.delays().size() - 1, sys.num_inputs(), sys.num_outputs());
  return kExitConverged;
}

int cmd_run(const RunConfig& config) {
  if (config.mode == "all") throw Error(morgreed::ErrorCode::InvalidConfig, "mode 'all' belongs to the compare command");
  const auto sys = morgreed::load_system(config);
  const auto mode = morgreed::parse_mode(config.mode);
  const morgreed::MethodSpec method = morgreed::method_for(mode, config.greedy.set_policy);
  const morgreed::ValidationReference reference(sys, config.validation.points(), nullptr, config.threads);
  const morgreed::MethodRun run = morgreed::run_method(sys, config, method, reference);
  write_outputs(config, run);
  morgreed::ComparisonReport report;
  report.rows.push_back(run.row);
  morgreed::write_text(fs::path(config.output_dir) / (method.label + ".summary.csv"), report.to_csv(config.timing));
  print_rows(report);
  return finish(report);
}

int cmd_compare(const RunConfig& config) {
  const auto sys = morgreed::load_system(config);
  const morgreed::Comparison comparison = morgreed::run_comparison(sys, config);
  for (const auto& run : comparison.runs) write_outputs(config, run);
  const fs::path dir = config.output_dir;
  morgreed::write_text(dir / "report.csv", comparison.report.to_csv(config.timing));
  morgreed::write_text(dir / "report.json", comparison.report.to_json(config.timing));
  print_rows(comparison.report);
  return finish(comparison.report);
}

int cmd_trace(const std::string& log_path, const std::string& model, bool true_error, bool delta,
              const std::string& output_dir) {
  const morgreed::RunLog log = morgreed::read_run_log(log_path);
  RunConfig config;
  if (!log.header.run_config.empty()) config = morgreed::run_config_from_json(log.header.run_config);
  if (!model.empty()) {
    config.model = model;
    config.synthetic.reset();
  }
  const auto sys = morgreed::load_system(config);
  morgreed::TraceOptions options;
  options.true_error = true_error;
  options.delta = delta;
  options.threads = morgreed::threads_from_env();
  const morgreed::Trace trace = morgreed::trace_run(sys, log, options);
  const fs::path dir = output_dir;
  const std::string stem = fs::path(log_path).stem().string();
  morgreed::write_text(dir / (stem + ".trace.csv"), trace.rows_csv());
  morgreed::write_text(dir / (stem + ".samples.csv"), trace.samples_csv());
  std::printf("wrote %zu trace rows and %zu samples for %s\n", trace.rows.size(), trace.samples.size(),
              log.header.method.c_str());
  return kExitConverged;
}

int cmd_validate(const RunConfig& config, const std::string& rom_path) {
  const auto sys = morgreed::load_system(config);
  const morgreed::ReducedModel rom = morgreed::read_rom(rom_path);
  const double err = morgreed::validate(sys, rom, config.validation.points(), nullptr, config.threads);
  nlohmann::ordered_json j{{"rom", rom_path}, {"order", rom.order()}, {"points", config.validation.count},
                           {"valid_err", err}};
  std::cout << j.dump() << '\n';
  return kExitConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy reduced-basis model order reduction for parametric and time-delay systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "morgreed 0.1.0");

  auto* gen = app.add_subcommand("generate", "write a seeded synthetic delay system");
  morgreed::SyntheticSpec spec;
  std::string gen_config;
  std::string gen_output;
  gen->add_option("-c,--config", gen_config, "JSON synthetic spec; flags override it")->check(CLI::ExistingFile);
  gen->add_option("--order", spec.order, "state dimension n");
  gen->add_option("--delays", spec.delays, "number of nonzero delays d");
  gen->add_option("--inputs", spec.inputs);
  gen->add_option("--outputs", spec.outputs);
  gen->add_option("--density", spec.density, "off-diagonal fill");
  gen->add_option("--modes", spec.modes, "resonant modes in band (0 = automatic)");
  gen->add_option("--f-low", spec.f_low);
  gen->add_option("--f-high", spec.f_high);
  gen->add_option("--seed", spec.seed);
  gen->add_option("-o,--output", gen_output, "model file to write")->required();

  auto* run = app.add_subcommand("run", "run one greedy driver, write its log, ROM and summary");
  RunFlags run_flags;
  run_flags.attach(*run, true);

  auto* compare = app.add_subcommand("compare", "run all five methods and write a comparison report");
  RunFlags compare_flags;
  compare_flags.attach(*compare, false);

  auto* trace = app.add_subcommand("trace", "replay a run log into plot-ready CSV");
  std::string trace_log;
  std::string trace_model;
  std::string trace_out = ".";
  bool trace_true = false;
  bool trace_delta = false;
  trace->add_option("-l,--log", trace_log, "run log (.jsonl)")->required();
  trace->add_option("-m,--model", trace_model, "model file; defaults to the one recorded in the log");
  trace->add_flag("--true-error", trace_true, "add the true error over each iteration's training set");
  trace->add_flag("--delta", trace_delta, "add true error and delta at the selected sample");
  trace->add_option("-o,--output-dir", trace_out);

  auto* val = app.add_subcommand("validate", "max output error of an exported ROM over the validation grid");
  RunFlags val_flags;
  val_flags.attach(*val, false);
  std::string val_rom;
  val->add_option("-r,--rom", val_rom, "ROM file (morgreed-rom-v1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) report_error("InvalidArguments", e.what());
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*gen) {
      if (!gen_config.empty()) {
        const morgreed::SyntheticSpec base = morgreed::synthetic_from_json(morgreed::read_text(gen_config));
        // Flags given explicitly win over the file.
        morgreed::SyntheticSpec merged = base;
        for (const auto* opt : gen->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name();
          if (name == "--order") merged.order = spec.order;
          if (name == "--delays") merged.delays = spec.delays;
          if (name == "--inputs") merged.inputs = spec.inputs;
          if (name == "--outputs") merged.outputs = spec.outputs;
          if (name == "--density") merged.density = spec.density;
          if (name == "--modes") merged.modes = spec.modes;
          if (name == "--f-low") merged.f_low = spec.f_low;
          if (name == "--f-high") merged.f_high = spec.f_high;
          if (name == "--seed") merged.seed = spec.seed;
        }
        spec = merged;
      }
      return cmd_generate(spec, gen_output);
    }
    if (*run) {
      RunConfig config = run_flags.resolve();
      if (run_flags.benchmark && run_flags.mode.empty() && config.mode == "all") config.mode = "standard";
      return cmd_run(config);
    }
    if (*compare) {
      RunConfig config = compare_flags.resolve();
      config.mode = "all";
      return cmd_compare(config);
    }
    if (*trace) return cmd_trace(trace_log, trace_model, trace_true, trace_delta, trace_out);
    if (*val) return cmd_validate(val_flags.resolve(), val_rom);
  } catch (const Error& e) {
    report_error(morgreed::to_string(e.code()), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return kExitError;
  }
  return kExitError;
}

