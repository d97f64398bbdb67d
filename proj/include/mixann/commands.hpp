#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixann/config.hpp"

namespace mixann {

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;  // overrides output_dir
  std::int64_t seed_offset = 0;
  int jobs = 1;
};

enum class SweepParameter { K, Eta };

SweepParameter sweep_parameter_from_string(const std::string& name);

// Each verb returns a process exit code. Errors are reported on stderr and
// map to exit 1.
int cmd_benchmark(const CommandOptions& opts);
int cmd_sweep(const CommandOptions& opts, SweepParameter param, const std::vector<double>& values);
int cmd_ablation(const CommandOptions& opts);
int cmd_case_study(const CommandOptions& opts);

/// Config with --out and --seed-offset applied.
AppConfig resolve_config(const CommandOptions& opts);

/// Regular g x g grid over the bounding box of `dataset` (2-D only), rows in
/// y-major order. Returns x,y pairs flattened.
std::vector<double> bounding_grid(const Dataset& dataset, int g);

}  // namespace mixann
