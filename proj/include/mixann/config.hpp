#pragma once

// Strict JSON experiment configuration. Unknown keys are rejected, required
// keys must be present and every numeric field is range-checked at load.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixann/trainer.hpp"

namespace mixann {

struct DatasetSource {
  std::optional<std::filesystem::path> csv;
  std::optional<ToySpec> toy;
};

struct AppConfig {
  DatasetSource dataset;
  SplitSpec split;
  std::vector<std::uint64_t> seeds;
  std::vector<Method> methods;
  std::vector<ClassifierSpec> classifiers;
  std::optional<OversampleRequest> oversample;
  EnvConfig env;
  AgentConfig agent;
  int episodes = 100;
  RewardMode reward_mode = RewardMode::Full;
  int rollouts = 5;
  bool persist_classifier = false;
  int grid = 200;
  std::filesystem::path output_dir = "out";
  bool trace = false;
};

AppConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
AppConfig load_config(const std::filesystem::path& path);

/// The fully resolved configuration (defaults filled in), echoed in reports.
nlohmann::ordered_json config_to_json(const AppConfig& cfg);

Dataset load_dataset(const AppConfig& cfg);

/// Experiment settings for one classifier.
ExperimentConfig experiment_config(const AppConfig& cfg, const ClassifierSpec& classifier);

}  // namespace mixann
