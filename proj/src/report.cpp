#include "mixann/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixann/error.hpp"

namespace mixann {

using nlohmann::ordered_json;

ordered_json scores_to_json(const MacroScores& scores) {
  return {{"precision", scores.precision}, {"recall", scores.recall}, {"f1", scores.f1}};
}

ordered_json experiment_to_json(const ExperimentReport& report) {
  ordered_json per_seed = ordered_json::array();
  for (const auto& r : report.per_seed) {
    per_seed.push_back({{"seed", r.seed},
                        {"precision", r.scores.precision},
                        {"recall", r.scores.recall},
                        {"f1", r.scores.f1},
                        {"synthetics", r.synthetics},
                        {"synthetic_minority", r.synthetic_minority},
                        {"mean_episode_length", r.mean_episode_length}});
  }
  return {{"method", to_string(report.method)},
          {"classifier", to_string(report.classifier)},
          {"mean", scores_to_json(report.mean)},
          {"per_seed", per_seed},
          {"augmentation",
           {{"total_synthetics", report.total_synthetics},
            {"synthetic_minority", report.total_synthetic_minority},
            {"synthetic_majority", report.total_synthetics - report.total_synthetic_minority},
            {"mean_episode_length", report.mean_episode_length}}}};
}

ordered_json report_to_json(const std::string& command, const ordered_json& config_echo,
                            const std::vector<ReportRow>& rows) {
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = command;
  out["config"] = config_echo;
  ordered_json jrows = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json results = ordered_json::array();
    for (const auto& r : row.by_classifier) results.push_back(experiment_to_json(r));
    jrows.push_back({{"name", row.name}, {"results", results}});
  }
  out["rows"] = jrows;
  return out;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string report_to_table(const std::string& title, const std::vector<ReportRow>& rows) {
  std::size_t name_width = title.size();
  for (const auto& r : rows) name_width = std::max(name_width, r.name.size());
  name_width += 2;
  constexpr std::size_t kCol = 10;

  std::ostringstream out;
  if (rows.empty()) return "";
  out << pad("", name_width);
  for (const auto& r : rows.front().by_classifier) {
    out << "| " << pad(to_string(r.classifier), 3 * kCol);
  }
  out << '\n' << pad(title, name_width);
  for (std::size_t c = 0; c < rows.front().by_classifier.size(); ++c)
    out << "| " << pad("P", kCol) << pad("R", kCol) << pad("F1", kCol);
  out << '\n';
  out << std::string(name_width + rows.front().by_classifier.size() * (3 * kCol + 2), '-') << '\n';
  for (const auto& row : rows) {
    out << pad(row.name, name_width);
    for (const auto& r : row.by_classifier) {
      out << "| " << pad(fixed(r.mean.precision), kCol) << pad(fixed(r.mean.recall), kCol)
          << pad(fixed(r.mean.f1), kCol);
    }
    out << '\n';
  }
  // Drop the padding after the last column.
  std::string text = out.str();
  std::string trimmed;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + '\n';
  }
  return trimmed;
}

std::string trace_to_jsonl(const std::string& row, const ExperimentReport& report) {
  std::string out;
  for (std::size_t s = 0; s < report.traces.size(); ++s) {
    for (const auto& step : report.traces[s].steps) {
      ordered_json j = {{"row", row},
                        {"classifier", to_string(report.classifier)},
                        {"seed", report.per_seed[s].seed},
                        {"episode", step.episode},
                        {"step", step.step},
                        {"i0", step.i0},
                        {"i1", step.i1},
                        {"raw", step.raw},
                        {"action",
                         {{"k", step.action.k},
                          {"alpha", step.action.alpha},
                          {"n", step.action.n},
                          {"epsilon", step.action.epsilon}}},
                        {"reward", step.reward},
                        {"delta_m", step.diagnostics.delta_m},
                        {"confidence", step.diagnostics.confidence},
                        {"val_score", step.diagnostics.val_score},
                        {"terminal", step.terminal},
                        {"synthetic_label", step.synthetic_label}};
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mixann
