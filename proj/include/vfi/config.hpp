#pragma once

#include <string>
#include <vector>

#include "vfi/common.hpp"

namespace vfi {

// Flat ordered key=value experiment description. Canonical text form is one
// `key=value` per line with `command` first; parse(emit(c)) == c and unknown
// keys are rejected.
struct ExperimentConfig {
  std::string command;  // constants | reach | verify | oracle | estimate | sweep
  std::vector<std::pair<std::string, std::string>> kv;

  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, const std::string& value);

  bool operator==(const ExperimentConfig& o) const = default;
};

ExperimentConfig parse_config(const std::string& text);
std::string emit_config(const ExperimentConfig& c);

// Stable descriptive tags for every check the CLI can run, emitted by
// --manifest.
struct ManifestEntry {
  std::string check;
  std::string description;
};
std::vector<ManifestEntry> check_manifest();

// Executes the experiment; returns the process exit code (0 = all asserted
// checks pass, 1 = assertion failure, 2 = config error).
int run_experiment(const ExperimentConfig& c);

}  // namespace vfi
