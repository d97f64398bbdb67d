#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixann/commands.hpp"
#include "mixann/log.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mixann: iterative mix-up augmentation for imbalanced classification"};
  app.require_subcommand(1);

  mixann::CommandOptions opts;
  std::string out;
  bool verbose = false;
  bool quiet = false;
  app.add_option("--config", opts.config, "experiment config (JSON)")->required();
  app.add_option("--out", out, "output directory (overrides output_dir)");
  app.add_option("--seed-offset", opts.seed_offset, "added to every configured seed");
  app.add_option("--jobs", opts.jobs, "seeds run in parallel")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "progress on stderr");
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  auto* benchmark = app.add_subcommand("benchmark", "run every listed method");
  auto* sweep = app.add_subcommand("sweep", "mixann over a range of K or eta");
  std::string param;
  std::vector<double> values;
  sweep->add_option("--param", param, "K or eta")->required();
  sweep->add_option("--values", values, "values to try")->expected(0, -1);
  auto* ablation = app.add_subcommand("ablation", "mixann under each reward mode");
  auto* case_study = app.add_subcommand("case-study", "synthetics and decision grid for 2-D data");

  CLI11_PARSE(app, argc, argv);
  if (!out.empty()) opts.out = out;
  mixann::log::set_level(quiet ? mixann::log::Level::Quiet
                               : verbose ? mixann::log::Level::Info : mixann::log::Level::Warning);

  if (benchmark->parsed()) return mixann::cmd_benchmark(opts);
  if (ablation->parsed()) return mixann::cmd_ablation(opts);
  if (case_study->parsed()) return mixann::cmd_case_study(opts);
  if (sweep->parsed()) {
    mixann::SweepParameter p;
    try {
      p = mixann::sweep_parameter_from_string(param);
    } catch (const std::exception& e) {
      std::cerr << "mixann sweep: " << e.what() << '\n';
      return 1;
    }
    return mixann::cmd_sweep(opts, p, values);
  }
  return 1;
}
