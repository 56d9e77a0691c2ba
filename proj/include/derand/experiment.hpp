// Copyright 2026 the derand authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: flat key-value configs, deterministic runners
// for the desk-scale experiment kinds, CSV/JSON emission, and manifests that
// pin every derived parameter.

#ifndef DERAND_EXPERIMENT_HPP
#define DERAND_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <string>

namespace derand::experiment {

inline constexpr const char* kLibraryVersion = "derand 0.1.0";

/// Flat typed key-value configuration. Keys are validated against the
/// whitelist of the experiment kind; unknown keys are rejected by name.
struct ExperimentConfig {
  std::string kind;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  uint64_t get_seed(const std::string& key, uint64_t fallback) const;  // decimal or 0x hex
  double get_real(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  bool operator==(const ExperimentConfig& o) const { return kind == o.kind && values == o.values; }
};

/// Parses the flat text format (`key = value`, `#` comments) or, when the
/// first character is '{', a flat JSON object. Strict: unknown keys fail.
ExperimentConfig load_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical dump; load(dump(load(t))) == load(t).
std::string dump_config(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical dump, hex.
std::string config_hash(const ExperimentConfig& cfg);

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 usage/config error, 2 assertion-style failure
  std::string summary_json;
};

/// Runs the experiment, writing results.csv / results.json / manifest.json
/// under out_dir. Deterministic: identical config + seed give byte-identical
/// files.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace derand::experiment

#endif  // DERAND_EXPERIMENT_HPP
