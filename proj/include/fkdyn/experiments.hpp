#pragma once

// Named, seeded experiments with strict JSON configs. Each run writes
// results.csv and summary.json; identical configs give identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fkdyn {

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir;
};

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::string csv;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::string summary_json(const ExperimentConfig& config) const;
};

/// Validates the top-level keys; params are checked by the experiment itself.
/// InvalidConfig messages name the offending key path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

std::vector<std::string> experiment_names();

/// Runs without touching the file system.
ExperimentResult evaluate_experiment(const ExperimentConfig& config);

/// Runs and writes results.csv and summary.json into config.output_dir.
/// Returns 0 if every check passes, 1 otherwise.
int run_experiment(const ExperimentConfig& config);

/// Seed for instance i of a named stream, by splitmix64.
std::uint64_t instance_seed(std::uint64_t seed, const std::string& stream, std::uint64_t i);

}  // namespace fkdyn
