// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "morgreed/bench.hpp"
#include "morgreed/estimator.hpp"
#include "morgreed/greedy.hpp"
#include "morgreed/io.hpp"
#include "morgreed/surrogate.hpp"
#include "morgreed/synthetic.hpp"

using namespace morgreed;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%s; %.1f s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Random systems shared by the estimator criteria.
struct Case {
  ParametricSystem sys;
  GreedyResult greedy;
  std::vector<FrequencyPoint> points;
};

std::vector<Case> make_cases(std::size_t count) {
  Rng rng(2024);
  std::vector<Case> cases;
  for (std::size_t k = 0; k < count; ++k) {
    SyntheticSpec spec;
    spec.order = 50 + rng.index(151);
    spec.delays = 2 + rng.index(7);
    spec.inputs = 1 + rng.index(3);
    spec.outputs = 1 + rng.index(3);
    spec.seed = 100 + k;
    ParametricSystem sys(generate_synthetic(spec));
    GreedyConfig config;
    config.tol = 1e-14;
    config.max_iterations = 3;
    GreedyResult greedy = run_standard(sys, make_grid(spec.f_low, spec.f_high, 30, Spacing::Linear), config);
    std::vector<FrequencyPoint> points;
    for (int i = 0; i < 25; ++i) {
      points.push_back(FrequencyPoint::from_hz(std::pow(10.0, rng.uniform(std::log10(spec.f_low), std::log10(spec.f_high)))));
    }
    cases.push_back(Case{std::move(sys), std::move(greedy), std::move(points)});
  }
  return cases;
}

void sandwich(const std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  double worst = 1e300;
  std::size_t tested = 0;
  for (const auto& c : cases) {
    const BoundEstimator bound(c.sys, c.greedy.rom, c.greedy.estimator);
    for (const auto& p : c.points) {
      const double est = bound.estimate(p);
      const double err = output_error(c.sys, c.greedy.rom, p);
      const double delta = delta_diagnostic(c.greedy.estimator, c.sys, c.greedy.rom, p);
      const double scale = std::max(1.0, err);
      worst = std::min(worst, std::min(err - (est - delta), (est + delta) - err) / scale);
      ++tested;
    }
  }
  const double t = seconds_since(t0);
  report(1, worst >= -1e-9 && t < 120.0, "estimator minus/plus delta brackets the true error",
         fmt("%.0f points, worst scaled slack %.3g", static_cast<double>(tested), worst), t);
}

void zero_estimator(const std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const Case& c = cases[k];
    const ResidualEstimator same = ResidualEstimator::with_basis(c.sys, c.greedy.rom.basis());
    const BoundEstimator bound(c.sys, c.greedy.rom, same);
    double scale = 0.0;
    double largest = 0.0;
    for (const auto& p : c.points) {
      scale = std::max(scale, max_abs(transfer_function(c.sys, p)));
      largest = std::max(largest, bound.estimate(p));
    }
    worst = std::max(worst, largest / scale);
  }
  const double t = seconds_since(t0);
  report(2, worst <= 1e-9 && t < 30.0, "auxiliary basis equal to V gives a zero estimator",
         fmt("max estimate / max|H| = %.3g", worst), t);
}

void exact_estimator(const std::vector<Case>& cases) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const Case& c = cases[k];
    const ResidualEstimator full = ResidualEstimator::with_basis(c.sys, BasisMatrix::identity(c.sys.order()));
    const BoundEstimator bound(c.sys, c.greedy.rom, full);
    for (const auto& p : c.points) {
      const double err = output_error(c.sys, c.greedy.rom, p);
      worst = std::max(worst, std::abs(bound.estimate(p) - err) / std::max(1.0, err));
    }
  }
  const double t = seconds_since(t0);
  report(3, worst <= 1e-8 && t < 30.0, "identity auxiliary basis gives the true error",
         fmt("max scaled gap %.3g", worst), t);
}

void interpolation(const ParametricSystem& sys, const Comparison& cmp) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& run : cmp.runs) {
    if (!run.result || !run.result->converged) continue;
    for (const auto& rec : run.log.records) {
      const FrequencyPoint p = FrequencyPoint::from_hz(rec.snapshot_f);
      const ComplexMatrix h = transfer_function(sys, p);
      const double gap = max_abs(h - reduced_transfer(run.result->rom, p));
      worst = std::max(worst, gap / std::max(1.0, max_abs(h)));
      ++checked;
    }
  }
  const double t = seconds_since(t0);
  report(4, checked > 0 && worst <= 1e-6 && t < 60.0, "reduced model interpolates H at the selected samples",
         fmt("%.0f samples, worst scaled gap %.3g", static_cast<double>(checked), worst), t);
}

void rbf_reproduction() {
  const auto t0 = Clock::now();
  Rng rng(7);
  double worst = 0.0;
  double worst_pointwise = 0.0;
  std::size_t regularized = 0;
  for (int fit = 0; fit < 100; ++fit) {
    const std::size_t m = 3 + rng.index(23);
    std::vector<double> centers;
    while (centers.size() < m) {
      const double x = rng.uniform();
      if (std::find(centers.begin(), centers.end(), x) == centers.end()) centers.push_back(x);
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < m; ++i) values.push_back(std::pow(10.0, rng.uniform(-6.0, 0.0)));
    const RbfSurrogate s = rbf_fit(centers, values, kDefaultRbfShape);
    if (s.regularized()) ++regularized;
    // Values span six decades; residuals are measured against the data scale.
    const double scale = *std::max_element(values.begin(), values.end());
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = std::abs(s(centers[i]) - values[i]);
      worst = std::max(worst, gap / scale);
      worst_pointwise = std::max(worst_pointwise, gap / values[i]);
    }
  }
  const double t = seconds_since(t0);
  report(5, worst <= 1e-8 && regularized == 0 && t < 10.0, "RBF surrogate reproduces its data at the centers",
         fmt("worst residual / max value %.3g, worst pointwise relative %.3g", worst, worst_pointwise) +
             ", regularized fits " + std::to_string(regularized),
         t);
}

void protocol(const Comparison& cmp, double seconds) {
  bool ok = cmp.report.rows.size() == 5;
  std::string detail;
  for (const auto& row : cmp.report.rows) {
    ok = ok && row.converged && !row.failed && row.valid_err <= 1e-2;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s it=%zu solves=%zu valid=%.2e", detail.empty() ? "" : ", ", row.method.c_str(),
                  row.iterations, row.fom_solves, row.valid_err);
    detail += buf;
  }
  const ReportRow* standard = cmp.report.find("standard");
  const ReportRow* bi = cmp.report.find("bifidelity_add_remove");
  const ReportRow* multi = cmp.report.find("multifidelity_add_remove");
  ok = ok && standard && bi && multi && multi->fom_solves < standard->fom_solves && multi->fom_solves <= bi->fom_solves;
  report(6, ok && seconds < 600.0, "benchmark: five methods converge, validated, fewer solves", detail, seconds);
}

void latch(const Comparison& cmp, double epsilon) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t runs = 0;
  for (const auto& run : cmp.runs) {
    if (run.method.mode != GreedyMode::Multifidelity) continue;
    ++runs;
    const auto& recs = run.log.records;
    bool latched = false;
    std::size_t flips = 0;
    bool prev_frozen = false;
    for (const auto& rec : recs) {
      const std::size_t expected = latched ? 1 : 2;
      ok = ok && rec.fom_solves == expected;
      if (rec.frozen != prev_frozen) ++flips;
      prev_frozen = rec.frozen;
      ok = ok && rec.frozen == (latched || rec.epsilon < epsilon);
      latched = latched || rec.epsilon < epsilon;
    }
    ok = ok && flips == 1 && latched;
  }
  report(7, ok && runs == 2, "multi-fidelity latch: two solves until the freeze, one after",
         fmt("%.0f multi-fidelity logs checked", static_cast<double>(runs)), seconds_since(t0));
}

void variants(const ParametricSystem& sys, const RunConfig& base, const Comparison& cmp) {
  const auto t0 = Clock::now();
  const ValidationReference reference(sys, base.validation.points(), nullptr, base.threads);
  bool ok = true;
  std::string detail;
  auto check_run = [&](const MethodRun& run, std::size_t count) {
    bool good = run.row.converged && !run.row.failed && run.row.valid_err <= 1e-2;
    for (const auto& rec : run.log.records) good = good && rec.added.size() <= count && rec.removed.size() <= count;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s/%zu:%s", detail.empty() ? "" : ", ", run.method.label.c_str(), count,
                  good ? "ok" : "bad");
    detail += buf;
    ok = ok && good;
  };
  for (const auto& run : cmp.runs) {
    if (run.method.mode != GreedyMode::Standard) check_run(run, 1);
  }
  for (std::size_t count : {2u, 5u}) {
    RunConfig config = base;
    config.greedy.n_add = config.greedy.n_del = count;
    for (const auto& m : comparison_methods()) {
      if (m.mode == GreedyMode::Standard) continue;
      check_run(run_method(sys, config, m, reference), count);
    }
  }
  report(8, ok, "n_add = n_del in {1, 2, 5} converge within bounds", detail, seconds_since(t0));
}

std::string serialize(const Comparison& cmp) {
  std::ostringstream out;
  for (const auto& run : cmp.runs) {
    write_run_log(out, run.log);
    out << rom_to_string(run.result ? run.result->rom : ReducedModel{});
  }
  out << cmp.report.to_csv() << cmp.report.to_json();
  return out.str();
}

}  // namespace

int main() {
  try {
    const std::vector<Case> cases = make_cases(20);
    sandwich(cases);
    zero_estimator(cases);
    exact_estimator(cases);

    const RunConfig config = benchmark_config(1);
    const ParametricSystem sys = load_system(config);
    auto t0 = Clock::now();
    const Comparison cmp = run_comparison(sys, config);
    const double protocol_seconds = seconds_since(t0);

    interpolation(sys, cmp);
    rbf_reproduction();
    protocol(cmp, protocol_seconds);
    latch(cmp, config.greedy.epsilon);
    variants(sys, config, cmp);

    t0 = Clock::now();
    const Comparison again = run_comparison(load_system(benchmark_config(1)), benchmark_config(1));
    const std::string a = serialize(cmp);
    const std::string b = serialize(again);
    report(9, a == b, "repeated benchmark gives byte-identical logs and reports",
           fmt("%.0f bytes compared", static_cast<double>(a.size())), seconds_since(t0));
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
