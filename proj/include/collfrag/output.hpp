#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "collfrag/bounds.hpp"
#include "collfrag/config.hpp"
#include "collfrag/diagnostics.hpp"
#include "collfrag/integrate.hpp"

namespace collfrag {

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Integrates a configuration with its chosen method. The Picard method
// solves each interval between consecutive output times separately.
RunOutput simulate(const SimConfig& config);

// Existence constants from the discretised initial moments (tabulated at the
// configured horizons) and, in the non-existence regime, the T1(k) table on
// the default k grid.
BoundsReport bounds_for(const SimConfig& config, const State& initial);

nlohmann::json to_json(const BoundsReport& report);
nlohmann::json to_json(const CheckResult& check);

struct EmittedRun {
  std::vector<std::filesystem::path> files;  // CSVs, then manifest.json
  std::string content_hash;
};

// Writes moments.csv, one snapshot_<t>.csv per output time and
// manifest.json into dir (created if needed). Error messages name the path.
EmittedRun emit_outputs(const RunOutput& run, const SimConfig& config,
                        const std::filesystem::path& dir);

struct LoadedRun {
  SimConfig config;
  RunOutput run;
  std::string content_hash;
};

// Reads a directory produced by emit_outputs back into memory.
LoadedRun load_run(const std::filesystem::path& dir);

}  // namespace collfrag

namespace collfrag {

struct Verification {
  nlohmann::json report;
  bool passed = true;
};

// Mass budget, tail and superlinear moment monotonicity, clipped mass, the
// C1 bound at each configured horizon inside the existence window, and the
// non-existence growth inequality when that regime applies. The k = 1
// moment identity residual is reported for information only.
Verification verify_run(const SimConfig& config, const RunOutput& run);

}  // namespace collfrag
