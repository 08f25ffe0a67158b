#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "morgreed/error.hpp"
#include "morgreed/io.hpp"
#include "support/oracle.hpp"

using namespace morgreed;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorCode::InvalidConfig;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "morgreed_test_io";
  fs::create_directories(dir);
  return dir / name;
}

DelaySystem sample_delay(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_delay_system(rng, 12, 2, 2, 3);
}

void expect_same_transfer(const ParametricSystem& a, const ParametricSystem& b) {
  for (const auto& p : make_grid(0.05, 4.0, 7, Spacing::Log)) {
    EXPECT_EQ(transfer_function(a, p), transfer_function(b, p)) << p.f;
  }
}

}  // namespace

TEST(ModelIo, DelayRoundTrip) {
  const ParametricSystem sys(sample_delay(91));
  const std::string text = model_to_string(sys);
  EXPECT_NE(text.find(kDelayModelFormat), std::string::npos);
  const ParametricSystem back = model_from_string(text);
  ASSERT_TRUE(back.is_delay());
  EXPECT_EQ(back.delays(), sys.delays());
  expect_same_transfer(sys, back);
  EXPECT_EQ(model_to_string(back), text);
}

TEST(ModelIo, AffineRoundTrip) {
  const DelaySystem d = sample_delay(92);
  AffineSystem a;
  a.terms.push_back({Coefficient{CoefficientKind::Constant, 0.0, -1.0}, d.A[0]});
  a.terms.push_back({Coefficient{CoefficientKind::S, 0.0, 1.0}, d.E[0]});
  a.terms.push_back({Coefficient{CoefficientKind::ExpDelay, 0.3, -1.0}, d.A[1]});
  a.B = d.B;
  a.C = d.C;
  const ParametricSystem sys(a);
  const std::string text = model_to_string(sys);
  EXPECT_NE(text.find(kAffineModelFormat), std::string::npos);
  const ParametricSystem back = model_from_string(text);
  EXPECT_FALSE(back.is_delay());
  expect_same_transfer(sys, back);
}

TEST(ModelIo, FileRoundTrip) {
  const ParametricSystem sys(sample_delay(93));
  const fs::path path = scratch("nested/model.json");
  fs::remove_all(path.parent_path());
  write_model(path, sys);
  expect_same_transfer(sys, read_model(path));
}

TEST(ModelIo, MalformedInputs) {
  EXPECT_EQ(code_of([] { model_from_string("not json"); }), ErrorCode::InvalidModel);
  EXPECT_EQ(code_of([] { model_from_string(R"({"format":"other"})"); }), ErrorCode::InvalidModel);
  EXPECT_EQ(code_of([] { read_model(scratch("absent.json")); }), ErrorCode::InvalidModel);
  std::string text = model_to_string(ParametricSystem(sample_delay(94)));
  const auto pos = text.find("\"order\":");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 8, "\"orderx\":");
  EXPECT_EQ(code_of([&] { model_from_string(text); }), ErrorCode::InvalidModel);
}

TEST(RomIo, RoundTripGivesIdenticalTransfer) {
  const ParametricSystem sys(sample_delay(95));
  std::mt19937_64 rng(96);
  const ReducedModel rom = project(sys, BasisMatrix::from_orthonormal(oracle::random_orthonormal(rng, 12, 4)));
  const std::string text = rom_to_string(rom);
  const ReducedModel back = rom_from_string(text);
  EXPECT_EQ(back.order(), 4u);
  EXPECT_EQ(back.basis().matrix(), rom.basis().matrix());
  for (const auto& p : make_grid(0.05, 4.0, 7, Spacing::Log)) {
    EXPECT_EQ(reduced_transfer(back, p), reduced_transfer(rom, p));
  }
  const fs::path path = scratch("rom.json");
  write_rom(path, rom);
  EXPECT_EQ(rom_to_string(read_rom(path)), text);
  EXPECT_EQ(code_of([] { rom_from_string("{}"); }), ErrorCode::InvalidModel);
}

TEST(ConfigIo, RoundTrip) {
  GreedyConfig c;
  c.mode = GreedyMode::Multifidelity;
  c.set_policy = SetPolicy::AddRemove;
  c.tol = 2.5e-4;
  c.epsilon = 0.05;
  c.n_add = 4;
  c.n_del = 2;
  c.rbf_shape = 12.5;
  c.rbf_log_coordinates = true;
  c.normalization = ErrorNormalization::Relative;
  c.initial_index = 3;
  const GreedyConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.mode, c.mode);
  EXPECT_EQ(back.tol, c.tol);
  EXPECT_EQ(back.n_add, 4u);
  EXPECT_TRUE(back.rbf_log_coordinates);
}

TEST(RunLogIo, RoundTripAndTimingFlag) {
  RunLog log;
  log.header.method = "bifidelity_add_remove";
  log.header.model = "synthetic";
  log.header.sets.xi_c = make_grid(1.0, 3.0, 3, Spacing::Linear);
  log.header.sets.xi_f = make_grid(1.0, 3.0, 9, Spacing::Linear);
  log.header.run_config = R"({"seed":4})";
  IterationRecord rec;
  rec.iteration = 1;
  rec.snapshot_f = 1.0;
  rec.residual_snapshot_f = 2.0;
  rec.selected_f = 2.75;
  rec.added = {2.25};
  rec.removed = {3.0};
  rec.epsilon = 0.1 + 0.2;
  rec.wall_seconds = 1.5;
  log.records.push_back(rec);
  rec.iteration = 2;
  rec.residual_snapshot_f.reset();
  rec.frozen = true;
  log.records.push_back(rec);

  std::ostringstream plain;
  write_run_log(plain, log);
  EXPECT_EQ(plain.str().find("wall_seconds"), std::string::npos);
  std::ostringstream timed;
  write_run_log(timed, log, true);
  EXPECT_NE(timed.str().find("wall_seconds"), std::string::npos);

  const fs::path path = scratch("run.jsonl");
  write_run_log(path, log);
  const RunLog back = read_run_log(path);
  EXPECT_EQ(back.header.method, log.header.method);
  EXPECT_EQ(back.header.sets.xi_f.size(), 9u);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[0].epsilon, 0.1 + 0.2);
  EXPECT_EQ(*back.records[0].residual_snapshot_f, 2.0);
  EXPECT_FALSE(back.records[1].residual_snapshot_f.has_value());
  EXPECT_TRUE(back.records[1].frozen);
  std::ostringstream again;
  write_run_log(again, back);
  EXPECT_EQ(again.str(), plain.str());
}

TEST(RunLogIo, MissingOrMalformed) {
  EXPECT_EQ(code_of([] { read_run_log(scratch("nope.jsonl")); }), ErrorCode::MissingLog);
  const fs::path path = scratch("bad.jsonl");
  std::ofstream(path) << "{\"format\":\"morgreed-log-v1\"\n";
  EXPECT_EQ(code_of([&] { read_run_log(path); }), ErrorCode::MissingLog);
}
