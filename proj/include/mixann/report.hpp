#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixann/trainer.hpp"

namespace mixann {

inline constexpr int kReportSchemaVersion = 1;

/// One report row: an ExperimentReport per classifier for the same method or
/// ablation variant.
struct ReportRow {
  std::string name;
  std::vector<ExperimentReport> by_classifier;
};

nlohmann::ordered_json scores_to_json(const MacroScores& scores);
nlohmann::ordered_json experiment_to_json(const ExperimentReport& report);

/// report.json body.
nlohmann::ordered_json report_to_json(const std::string& command, const nlohmann::ordered_json& config_echo,
                                      const std::vector<ReportRow>& rows);

/// report.txt body: rows by name, precision / recall / F1 per classifier.
std::string report_to_table(const std::string& title, const std::vector<ReportRow>& rows);

/// One JSON object per training step.
std::string trace_to_jsonl(const std::string& row, const ExperimentReport& report);

/// Writes `text` to a temporary sibling then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace mixann
