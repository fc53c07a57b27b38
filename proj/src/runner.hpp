#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace sic {

struct EstimateRow {
  std::string name;
  double value = 0;
  double stderr_val = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  int64_t reps = 0;
};

struct RunResult {
  std::string command;
  std::string config_hash; // 16 hex digits of the canonical config
  uint64_t seed = 0;
  std::vector<EstimateRow> estimates;
  std::vector<std::string> files; // data files written under out_dir
  double runtime_s = 0;

  // Pinned schema: {command, config_hash, seed,
  // estimates:[{name,value,stderr,ci_lo,ci_hi,reps}], runtime_s}. runtime_s is
  // the last key so byte comparisons can strip it.
  std::string json() const;
};

const std::vector<std::string>& command_names();
std::string version_string();

// Dispatches to the named operation, then (when out_dir is nonempty) writes
// result.json, any command CSVs, and manifest.json listing every data file.
// Unknown commands throw UsageError; module preconditions throw DomainError.
RunResult run_command(const std::string& command, const RunConfig& cfg,
                      const std::string& out_dir);

} // namespace sic
