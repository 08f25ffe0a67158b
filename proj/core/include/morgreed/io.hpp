#pragma once

// File formats: models, reduced models and greedy run logs (JSON / JSON lines).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "morgreed/error.hpp"
#include "morgreed/greedy.hpp"
#include "morgreed/rom.hpp"
#include "morgreed/system.hpp"

namespace morgreed {

inline constexpr std::string_view kDelayModelFormat = "morgreed-delay-v1";
inline constexpr std::string_view kAffineModelFormat = "morgreed-affine-v1";
inline constexpr std::string_view kRomFormat = "morgreed-rom-v1";
inline constexpr std::string_view kLogFormat = "morgreed-log-v1";

/// Delay systems use the delay format; affine systems list their terms as
/// {coefficient: {kind, tau, scale}, matrix: sparse}.
std::string model_to_string(const ParametricSystem& sys);
ParametricSystem model_from_string(std::string_view text);
void write_model(const std::filesystem::path& path, const ParametricSystem& sys);
ParametricSystem read_model(const std::filesystem::path& path);

/// Same container as the model with the projected operators and V.
std::string rom_to_string(const ReducedModel& rom);
ReducedModel rom_from_string(std::string_view text);
void write_rom(const std::filesystem::path& path, const ReducedModel& rom);
ReducedModel read_rom(const std::filesystem::path& path);

struct RunLogHeader {
  std::string method;        // e.g. "multifidelity_add_remove"
  std::string model;         // model path or a synthetic description
  GreedyConfig config;
  TrainingSets sets;         // initial training sets
  std::string run_config;    // optional JSON object echoed verbatim
};

struct RunLog {
  RunLogHeader header;
  std::vector<IterationRecord> records;
};

/// Header line then one record per line. Wall times are written only when
/// `include_timing` is set, so logs of identical runs compare equal.
void write_run_log(std::ostream& out, const RunLog& log, bool include_timing = false);
void write_run_log(const std::filesystem::path& path, const RunLog& log, bool include_timing = false);
/// Throws MissingLog when the file is absent or malformed.
RunLog read_run_log(const std::filesystem::path& path);

std::string record_to_json(const IterationRecord& rec, bool include_timing = false);
std::string config_to_json(const GreedyConfig& config);
GreedyConfig config_from_json(std::string_view text);

std::string read_text(const std::filesystem::path& path, ErrorCode missing = ErrorCode::InvalidModel);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace morgreed
