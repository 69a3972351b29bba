// Command-line front end: run benchmark experiments from a config file,
// estimate heuristic parameters for a dataset, or print its zero-rule
// accuracy.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <svmtune/svmtune.hpp>

namespace {

svmtune::DatasetSpec::Format parse_format(const std::string& format) {
  if (format == "csv") return svmtune::DatasetSpec::Format::Csv;
  if (format == "keel") return svmtune::DatasetSpec::Format::Keel;
  svmtune::fail("E_USAGE", "unknown format: " + format);
}

svmtune::Dataset load(const std::string& path, const std::string& format,
                      std::size_t label_column) {
  svmtune::DatasetSpec spec;
  spec.path = path;
  spec.name = std::filesystem::path(path).stem().string();
  spec.format = parse_format(format);
  spec.label_column = label_column;
  return svmtune::load_dataset(spec);
}

std::string default_output_dir() {
  if (const char* env = std::getenv("SVMTUNE_OUTPUT_DIR"); env && *env)
    return env;
  return "out";
}

int cmd_run(const std::string& config_path, int jobs,
            std::optional<std::uint64_t> seed,
            const std::string& output_dir_flag) {
  svmtune::ExperimentConfig config = svmtune::ExperimentConfig::load(config_path);
  if (seed) {
    config.base_seed = *seed;
    config.cv.base_seed = *seed;
    config.solver.seed = *seed;
  }
  if (!output_dir_flag.empty()) config.output_dir = output_dir_flag;
  if (config.output_dir.empty()) config.output_dir = default_output_dir();

  const svmtune::ExperimentOutput output = svmtune::run_experiment(config, jobs);
  for (const std::string& warning : output.warnings)
    std::cerr << "warning: " << warning << '\n';
  for (const std::string& path : output.csv_paths)
    std::cout << "wrote " << path << '\n';
  std::cout << "wrote " << output.summary_path << '\n';
  return 0;
}

int cmd_estimate(const std::string& path, const std::string& format,
                 std::size_t label_column, const std::string& heuristic,
                 std::uint64_t seed) {
  const svmtune::HeuristicId id = svmtune::heuristic_from_string(heuristic);
  const svmtune::Dataset ds = load(path, format, label_column);
  const svmtune::Scaler scaler = svmtune::fit_scaler(ds.features);
  const svmtune::Matrix standardized = svmtune::transform(scaler, ds.features);
  const svmtune::DistanceSample sample = svmtune::pairwise_distances(
      standardized, svmtune::kDefaultPairBudget, seed);
  const svmtune::HeuristicInput input{standardized, sample, ds.labels,
                                      ds.n_classes(), seed};
  const svmtune::SvmParams params = svmtune::estimate(id, input);
  std::cout << "C=" << svmtune::format_sig(params.c)
            << " gamma=" << svmtune::format_sig(params.gamma) << '\n';
  return 0;
}

int cmd_zero_rule(const std::string& path, const std::string& format,
                  std::size_t label_column) {
  const svmtune::Dataset ds = load(path, format, label_column);
  std::printf("%.1f\n", svmtune::zero_rule_accuracy(ds));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF-SVM parameter heuristics and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::optional<std::uint64_t> run_seed;
  std::string output_dir;
  CLI::App* run = app.add_subcommand("run", "Run experiments from a config file");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--jobs", jobs, "Worker threads (default 1)");
  run->add_option("--seed", run_seed, "Override the config base seed");
  run->add_option("--output-dir", output_dir, "Override the output directory");

  std::string est_path, est_format = "csv", est_heuristic;
  std::size_t est_label_column = svmtune::kLastColumn;
  std::uint64_t est_seed = 0;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Print heuristic (C, gamma) for a dataset");
  estimate->add_option("path", est_path, "Dataset file")->required();
  estimate->add_option("--format", est_format, "csv or keel");
  estimate->add_option("--heuristic", est_heuristic, "Heuristic name")->required();
  estimate->add_option("--label-column", est_label_column,
                       "Label column index (CSV; default last)");
  estimate->add_option("--seed", est_seed, "Distance sampling seed");

  std::string zr_path, zr_format = "csv";
  std::size_t zr_label_column = svmtune::kLastColumn;
  CLI::App* zero_rule =
      app.add_subcommand("zero-rule", "Print the zero-rule accuracy");
  zero_rule->add_option("path", zr_path, "Dataset file")->required();
  zero_rule->add_option("--format", zr_format, "csv or keel");
  zero_rule->add_option("--label-column", zr_label_column,
                        "Label column index (CSV; default last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: E_USAGE: " << e.what() << '\n';
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, jobs, run_seed, output_dir);
    if (estimate->parsed())
      return cmd_estimate(est_path, est_format, est_label_column,
                          est_heuristic, est_seed);
    if (zero_rule->parsed())
      return cmd_zero_rule(zr_path, zr_format, zr_label_column);
  } catch (const svmtune::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: E_INTERNAL: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
