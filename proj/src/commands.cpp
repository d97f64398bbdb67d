#include "mixann/commands.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <functional>
#include <iostream>
#include <limits>

#include "mixann/classifiers.hpp"
#include "mixann/error.hpp"
#include "mixann/log.hpp"
#include "mixann/report.hpp"

namespace mixann {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

SweepParameter sweep_parameter_from_string(const std::string& name) {
  if (name == "K") return SweepParameter::K;
  if (name == "eta") return SweepParameter::Eta;
  throw Error(ErrorCode::InvalidConfig, "sweep parameter must be K or eta, got '" + name + "'");
}

AppConfig resolve_config(const CommandOptions& opts) {
  AppConfig cfg = load_config(opts.config);
  if (opts.out) cfg.output_dir = *opts.out;
  for (auto& s : cfg.seeds) s += static_cast<std::uint64_t>(opts.seed_offset);
  return cfg;
}

namespace {

int guarded(const char* verb, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const Error& e) {
    std::cerr << "mixann " << verb << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "mixann " << verb << ": " << e.what() << '\n';
  }
  return 1;
}

std::string shortest(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::vector<ReportRow> run_methods(const AppConfig& cfg, const Dataset& data, int jobs) {
  std::vector<ReportRow> rows;
  for (Method m : cfg.methods) {
    ReportRow row{to_string(m), {}};
    for (const auto& cls : cfg.classifiers) {
      row.by_classifier.push_back(run_experiment(experiment_config(cfg, cls), data, m, jobs));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_reports(const AppConfig& cfg, const std::string& command, const std::string& title,
                   const std::vector<ReportRow>& rows) {
  fs::create_directories(cfg.output_dir);
  write_file_atomic(cfg.output_dir / "report.json",
                    report_to_json(command, config_to_json(cfg), rows).dump(2) + "\n");
  write_file_atomic(cfg.output_dir / "report.txt", report_to_table(title, rows));
  if (cfg.trace) {
    std::string lines;
    for (const auto& row : rows)
      for (const auto& r : row.by_classifier) lines += trace_to_jsonl(row.name, r);
    write_file_atomic(cfg.output_dir / "trace.jsonl", lines);
  }
}

}  // namespace

int cmd_benchmark(const CommandOptions& opts) {
  return guarded("benchmark", [&] {
    const AppConfig cfg = resolve_config(opts);
    const Dataset data = load_dataset(cfg);
    write_reports(cfg, "benchmark", "method", run_methods(cfg, data, opts.jobs));
  });
}

int cmd_sweep(const CommandOptions& opts, SweepParameter param, const std::vector<double>& values) {
  return guarded("sweep", [&] {
    if (values.empty()) throw Error(ErrorCode::InvalidConfig, "sweep values must not be empty");
    AppConfig cfg = resolve_config(opts);
    const Dataset data = load_dataset(cfg);
    const std::string name = param == SweepParameter::K ? "K" : "eta";

    ordered_json entries = ordered_json::array();
    for (double v : values) {
      AppConfig c = cfg;
      if (param == SweepParameter::K) {
        if (v != static_cast<double>(static_cast<int>(v)))
          throw Error(ErrorCode::InvalidConfig, "env.K: sweep value " + shortest(v) + " is not an integer");
        c.env.K = static_cast<int>(v);
      } else {
        c.env.eta = v;
      }
      try {
        c.env.validate();
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, "env." + name + ": " + e.what());
      }
      ordered_json scores;
      for (const auto& cls : c.classifiers) {
        auto report = run_experiment(experiment_config(c, cls), data, Method::Mixann, opts.jobs);
        scores[to_string(cls.kind)] = scores_to_json(report.mean);
      }
      entries.push_back({{"value", v}, {"scores", scores}});
    }
    ordered_json out = {{"schema_version", kReportSchemaVersion},
                        {"parameter", name},
                        {"method", "mixann"},
                        {"config", config_to_json(cfg)},
                        {"entries", entries}};
    fs::create_directories(cfg.output_dir);
    write_file_atomic(cfg.output_dir / "sweep.json", out.dump(2) + "\n");
  });
}

int cmd_ablation(const CommandOptions& opts) {
  return guarded("ablation", [&] {
    const AppConfig cfg = resolve_config(opts);
    const Dataset data = load_dataset(cfg);
    std::vector<ReportRow> rows;
    for (RewardMode mode :
         {RewardMode::Full, RewardMode::Random, RewardMode::NoImprovement, RewardMode::NoExploration}) {
      AppConfig c = cfg;
      c.reward_mode = mode;
      ReportRow row{to_string(mode), {}};
      for (const auto& cls : c.classifiers) {
        row.by_classifier.push_back(run_experiment(experiment_config(c, cls), data, Method::Mixann, opts.jobs));
      }
      rows.push_back(std::move(row));
    }
    write_reports(cfg, "ablation", "reward_mode", rows);
  });
}

std::vector<double> bounding_grid(const Dataset& dataset, int g) {
  if (dataset.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "case study needs 2-D data");
  if (g < 2) throw Error(ErrorCode::InvalidConfig, "case_study.grid: must be at least 2");
  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  for (const auto& s : dataset.samples()) {
    for (int j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], s.features[j]);
      hi[j] = std::max(hi[j], s.features[j]);
    }
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(g) * g * 2);
  for (int r = 0; r < g; ++r) {
    const double y = lo[1] + (hi[1] - lo[1]) * r / (g - 1);
    for (int c = 0; c < g; ++c) {
      out.push_back(lo[0] + (hi[0] - lo[0]) * c / (g - 1));
      out.push_back(y);
    }
  }
  return out;
}

int cmd_case_study(const CommandOptions& opts) {
  return guarded("case-study", [&] {
    const AppConfig cfg = resolve_config(opts);
    const Dataset data = load_dataset(cfg);
    if (data.dim() != 2) {
      throw Error(ErrorCode::DimensionMismatch,
                  "dataset: case study needs d = 2, got d = " + std::to_string(data.dim()));
    }
    const auto grid = bounding_grid(data, cfg.grid);
    const kernels::PointBlock block{grid, 2};
    const ExperimentConfig ec = experiment_config(cfg, cfg.classifiers.front());
    fs::create_directories(cfg.output_dir);

    for (Method m : cfg.methods) {
      SeedRun run = run_seed(ec, data, m, cfg.seeds.front());
      const std::string name = to_string(m);

      std::string syn = "x,y,label\n";
      for (const auto& s : run.synthetics) {
        syn += shortest(s.features[0]) + ',' + shortest(s.features[1]) + ',' + std::to_string(s.label) + '\n';
      }
      write_file_atomic(cfg.output_dir / ("synthetics_" + name + ".csv"), syn);

      const auto p = predict_proba_batch(*run.final_classifier, block);
      std::string out = "x,y,p\n";
      out.reserve(p.size() * 40);
      for (std::size_t i = 0; i < p.size(); ++i) {
        out += shortest(grid[2 * i]) + ',' + shortest(grid[2 * i + 1]) + ',' + shortest(p[i]) + '\n';
      }
      write_file_atomic(cfg.output_dir / ("grid_" + name + ".csv"), out);
      log::info("case-study: wrote " + name);
    }
  });
}

}  // namespace mixann
