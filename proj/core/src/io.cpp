#include "morgreed/io.hpp"

#include <fstream>
#include <sstream>

#include "detail/json_util.hpp"

namespace morgreed {

using detail::Json;

namespace {

Json parse(std::string_view text, ErrorCode code) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(code, std::string("malformed JSON: ") + e.what());
  }
}

void expect_format(const Json& j, std::string_view format, ErrorCode code) {
  if (!j.is_object() || !j.contains("format") || j.at("format").get<std::string>() != format) {
    throw Error(code, "expected format '" + std::string(format) + "'");
  }
}

std::vector<double> frequencies(const std::vector<FrequencyPoint>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.f);
  return out;
}

std::vector<FrequencyPoint> points(const Json& j) {
  std::vector<FrequencyPoint> out;
  for (const Json& f : j) out.push_back(FrequencyPoint::from_hz(f.get<double>()));
  return out;
}

Json terms_to_json(const std::vector<Coefficient>& coefficients, const std::vector<SparseTriplets>& matrices) {
  Json terms = Json::array();
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    terms.push_back(Json{{"coefficient", detail::coefficient_to_json(coefficients[k])},
                         {"matrix", detail::sparse_to_json(matrices[k])}});
  }
  return terms;
}

std::vector<SparseTriplets> source_matrices(const ParametricSystem& sys) {
  std::vector<SparseTriplets> out;
  for (const auto& t : sys.affine()->terms) out.push_back(t.matrix);
  return out;
}

}  // namespace

std::string model_to_string(const ParametricSystem& sys) {
  Json j;
  if (const DelaySystem* d = sys.delay()) {
    j["format"] = kDelayModelFormat;
    j["order"] = d->order;
    j["num_inputs"] = sys.num_inputs();
    j["num_outputs"] = sys.num_outputs();
    j["delays"] = d->delays;
    Json e = Json::array();
    Json a = Json::array();
    for (const auto& m : d->E) e.push_back(detail::sparse_to_json(m));
    for (const auto& m : d->A) a.push_back(detail::sparse_to_json(m));
    j["E"] = std::move(e);
    j["A"] = std::move(a);
  } else {
    j["format"] = kAffineModelFormat;
    j["order"] = sys.order();
    j["num_inputs"] = sys.num_inputs();
    j["num_outputs"] = sys.num_outputs();
    j["terms"] = terms_to_json(sys.coefficients(), source_matrices(sys));
  }
  j["B"] = detail::dense_to_json(sys.input());
  j["C"] = detail::dense_to_json(sys.output());
  return j.dump() + "\n";
}

ParametricSystem model_from_string(std::string_view text) {
  const Json j = parse(text, ErrorCode::InvalidModel);
  if (!j.is_object() || !j.contains("format")) throw Error(ErrorCode::InvalidModel, "model lacks a format tag");
  const std::string format = j.at("format").get<std::string>();
  try {
    const ComplexMatrix b = detail::dense_from_json(j.at("B"), "B");
    const ComplexMatrix c = detail::dense_from_json(j.at("C"), "C");
    if (format == kDelayModelFormat) {
      DelaySystem d;
      d.order = j.at("order").get<std::size_t>();
      d.delays = j.at("delays").get<std::vector<double>>();
      for (const Json& m : j.at("E")) d.E.push_back(detail::sparse_from_json(m));
      for (const Json& m : j.at("A")) d.A.push_back(detail::sparse_from_json(m));
      d.B = b;
      d.C = c;
      if (j.at("num_inputs").get<std::size_t>() != static_cast<std::size_t>(b.cols()) ||
          j.at("num_outputs").get<std::size_t>() != static_cast<std::size_t>(c.rows())) {
        throw Error(ErrorCode::DimensionMismatch, "num_inputs/num_outputs disagree with B/C");
      }
      return ParametricSystem(std::move(d));
    }
    if (format == kAffineModelFormat) {
      AffineSystem a;
      for (const Json& t : j.at("terms")) {
        a.terms.push_back({detail::coefficient_from_json(t.at("coefficient")), detail::sparse_from_json(t.at("matrix"))});
      }
      a.B = b;
      a.C = c;
      return ParametricSystem(std::move(a));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidModel, std::string("model field error: ") + e.what());
  }
  throw Error(ErrorCode::InvalidModel, "unknown model format '" + format + "'");
}

void write_model(const std::filesystem::path& path, const ParametricSystem& sys) {
  write_text(path, model_to_string(sys));
}

ParametricSystem read_model(const std::filesystem::path& path) {
  return model_from_string(read_text(path, ErrorCode::InvalidModel));
}

std::string rom_to_string(const ReducedModel& rom) {
  Json j;
  j["format"] = kRomFormat;
  j["order"] = rom.order();
  j["full_order"] = rom.basis().ambient_dim();
  j["num_inputs"] = rom.num_inputs();
  j["num_outputs"] = rom.num_outputs();
  std::vector<SparseTriplets> ops;
  for (const auto& op : rom.operators()) ops.push_back(SparseTriplets::from_dense(op));
  if (!rom.delays().empty()) {
    const std::size_t terms = rom.delays().size();
    j["delays"] = rom.delays();
    Json e = Json::array();
    Json a = Json::array();
    for (std::size_t k = 0; k < terms; ++k) {
      e.push_back(detail::sparse_to_json(ops[k]));
      a.push_back(detail::sparse_to_json(ops[terms + k]));
    }
    j["E"] = std::move(e);
    j["A"] = std::move(a);
  } else {
    j["terms"] = terms_to_json(rom.coefficients(), ops);
  }
  j["B"] = detail::dense_to_json(rom.input());
  j["C"] = detail::dense_to_json(rom.output());
  j["V"] = detail::real_to_json(rom.basis().matrix());
  return j.dump() + "\n";
}

ReducedModel rom_from_string(std::string_view text) {
  const Json j = parse(text, ErrorCode::InvalidModel);
  expect_format(j, kRomFormat, ErrorCode::InvalidModel);
  try {
    const auto r = j.at("order").get<std::size_t>();
    const auto n = j.at("full_order").get<std::size_t>();
    BasisMatrix v = BasisMatrix::from_orthonormal(detail::real_from_json(j.at("V"), n, r));
    std::vector<Coefficient> coefficients;
    std::vector<ComplexMatrix> operators;
    std::vector<double> delays;
    if (j.contains("delays")) {
      delays = j.at("delays").get<std::vector<double>>();
      coefficients = delay_coefficients(delays);
      for (const char* key : {"E", "A"}) {
        for (const Json& m : j.at(key)) operators.push_back(ComplexMatrix(detail::sparse_from_json(m).compress()));
      }
    } else {
      for (const Json& t : j.at("terms")) {
        coefficients.push_back(detail::coefficient_from_json(t.at("coefficient")));
        operators.push_back(ComplexMatrix(detail::sparse_from_json(t.at("matrix")).compress()));
      }
    }
    ComplexMatrix b = detail::dense_from_json(j.at("B"), "B");
    ComplexMatrix c = detail::dense_from_json(j.at("C"), "C");
    return ReducedModel(std::move(v), std::move(coefficients), std::move(operators), std::move(b), std::move(c),
                        std::move(delays));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidModel, std::string("rom field error: ") + e.what());
  }
}

void write_rom(const std::filesystem::path& path, const ReducedModel& rom) { write_text(path, rom_to_string(rom)); }

ReducedModel read_rom(const std::filesystem::path& path) {
  return rom_from_string(read_text(path, ErrorCode::InvalidModel));
}

namespace {

Json config_json(const GreedyConfig& c) {
  return Json{{"mode", to_string(c.mode)},
              {"set_policy", to_string(c.set_policy)},
              {"tol", c.tol},
              {"epsilon", c.epsilon},
              {"n_add", c.n_add},
              {"n_del", c.n_del},
              {"max_iterations", c.max_iterations},
              {"rbf_shape", c.rbf_shape},
              {"rbf_log_coordinates", c.rbf_log_coordinates},
              {"normalization", to_string(c.normalization)},
              {"initial_index", c.initial_index},
              {"min_coarse_size", c.min_coarse_size},
              {"stagnation_guard", c.stagnation_guard}};
}

GreedyConfig config_from(const Json& j) {
  GreedyConfig c;
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "greedy config must be a JSON object");
  try {
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("set_policy")) c.set_policy = parse_set_policy(j.at("set_policy").get<std::string>());
    c.tol = j.value("tol", c.tol);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.n_add = j.value("n_add", c.n_add);
    c.n_del = j.value("n_del", c.n_del);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.rbf_shape = j.value("rbf_shape", c.rbf_shape);
    c.rbf_log_coordinates = j.value("rbf_log_coordinates", c.rbf_log_coordinates);
    if (j.contains("normalization")) c.normalization = parse_normalization(j.at("normalization").get<std::string>());
    c.initial_index = j.value("initial_index", c.initial_index);
    c.min_coarse_size = j.value("min_coarse_size", c.min_coarse_size);
    c.stagnation_guard = j.value("stagnation_guard", c.stagnation_guard);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config field error: ") + e.what());
  }
  return c;
}

Json record_json(const IterationRecord& r, bool include_timing) {
  Json j{{"iteration", r.iteration}, {"snapshot_f", r.snapshot_f}};
  j["residual_snapshot_f"] = r.residual_snapshot_f ? Json(*r.residual_snapshot_f) : Json(nullptr);
  j["selected_f"] = r.selected_f;
  j["selected_residual_f"] = r.selected_residual_f ? Json(*r.selected_residual_f) : Json(nullptr);
  j["added"] = r.added;
  j["removed"] = r.removed;
  j["epsilon"] = r.epsilon;
  j["evaluated_size"] = r.evaluated_size;
  j["coarse_size"] = r.coarse_size;
  j["fom_solves"] = r.fom_solves;
  j["cumulative_fom_solves"] = r.cumulative_fom_solves;
  j["cumulative_estimator_evaluations"] = r.cumulative_estimator_evaluations;
  j["reduced_order"] = r.reduced_order;
  j["residual_order"] = r.residual_order;
  j["frozen"] = r.frozen;
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

IterationRecord record_from(const Json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<std::size_t>();
  r.snapshot_f = j.at("snapshot_f").get<double>();
  if (!j.at("residual_snapshot_f").is_null()) r.residual_snapshot_f = j.at("residual_snapshot_f").get<double>();
  r.selected_f = j.at("selected_f").get<double>();
  if (!j.at("selected_residual_f").is_null()) r.selected_residual_f = j.at("selected_residual_f").get<double>();
  r.added = j.at("added").get<std::vector<double>>();
  r.removed = j.at("removed").get<std::vector<double>>();
  r.epsilon = j.at("epsilon").get<double>();
  r.evaluated_size = j.at("evaluated_size").get<std::size_t>();
  r.coarse_size = j.at("coarse_size").get<std::size_t>();
  r.fom_solves = j.at("fom_solves").get<std::size_t>();
  r.cumulative_fom_solves = j.at("cumulative_fom_solves").get<std::size_t>();
  r.cumulative_estimator_evaluations = j.at("cumulative_estimator_evaluations").get<std::size_t>();
  r.reduced_order = j.at("reduced_order").get<std::size_t>();
  r.residual_order = j.at("residual_order").get<std::size_t>();
  r.frozen = j.at("frozen").get<bool>();
  r.wall_seconds = j.value("wall_seconds", 0.0);
  return r;
}

}  // namespace

std::string record_to_json(const IterationRecord& rec, bool include_timing) {
  return record_json(rec, include_timing).dump();
}

std::string config_to_json(const GreedyConfig& config) { return config_json(config).dump(); }

GreedyConfig config_from_json(std::string_view text) { return config_from(parse(text, ErrorCode::InvalidConfig)); }

void write_run_log(std::ostream& out, const RunLog& log, bool include_timing) {
  Json header{{"format", kLogFormat}, {"method", log.header.method}, {"model", log.header.model}};
  header["config"] = config_json(log.header.config);
  header["xi"] = frequencies(log.header.sets.xi);
  header["xi_c"] = frequencies(log.header.sets.xi_c);
  header["xi_f"] = frequencies(log.header.sets.xi_f);
  header["run_config"] = log.header.run_config.empty() ? Json(nullptr) : parse(log.header.run_config, ErrorCode::InvalidConfig);
  out << header.dump() << '\n';
  for (const auto& r : log.records) out << record_json(r, include_timing).dump() << '\n';
}

void write_run_log(const std::filesystem::path& path, const RunLog& log, bool include_timing) {
  std::ostringstream out;
  write_run_log(out, log, include_timing);
  write_text(path, out.str());
}

RunLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingLog, "cannot open run log " + path.string());
  RunLog log;
  std::string line;
  try {
    if (!std::getline(in, line)) throw Error(ErrorCode::MissingLog, "run log is empty: " + path.string());
    const Json header = parse(line, ErrorCode::MissingLog);
    expect_format(header, kLogFormat, ErrorCode::MissingLog);
    log.header.method = header.at("method").get<std::string>();
    log.header.model = header.at("model").get<std::string>();
    log.header.config = config_from(header.at("config"));
    log.header.sets.xi = points(header.at("xi"));
    log.header.sets.xi_c = points(header.at("xi_c"));
    log.header.sets.xi_f = points(header.at("xi_f"));
    if (!header.at("run_config").is_null()) log.header.run_config = header.at("run_config").dump();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      log.records.push_back(record_from(parse(line, ErrorCode::MissingLog)));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MissingLog, std::string("malformed run log: ") + e.what());
  }
  return log;
}

std::string read_text(const std::filesystem::path& path, ErrorCode missing) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::InvalidConfig, "write failed for " + path.string());
}

}  // namespace morgreed
