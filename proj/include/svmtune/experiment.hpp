#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "svmtune/cross_validation.hpp"
#include "svmtune/csv.hpp"
#include "svmtune/dataset.hpp"
#include "svmtune/error.hpp"
#include "svmtune/keel.hpp"
#include "svmtune/report.hpp"

// Experiment configuration (a JSON document; see README for the schema) and
// the driver that runs every dataset x scenario x method combination and
// writes CSV and Markdown reports. Runs are independent and may execute on a
// thread pool; outputs are assembled in a fixed order afterwards, so results
// do not depend on the job count.

namespace svmtune {

struct DatasetSpec {
  enum class Format { Csv, Keel };
  std::string name;
  std::string path;
  Format format = Format::Csv;
  std::size_t label_column = kLastColumn;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<HeuristicId> methods;
  bool scenario_heuristic = true;
  bool scenario_gscv_default = true;
  bool scenario_gscv_seeded = false;
  std::optional<SemiSupervisedConfig> semi_supervised;
  CvConfig cv;
  SolverConfig solver;
  std::string output_dir;
  std::uint64_t base_seed = 0;

  static ExperimentConfig load(const std::string& path);
};

inline Dataset load_dataset(const DatasetSpec& spec) {
  RawTable table = spec.format == DatasetSpec::Format::Keel
                       ? parse_keel(spec.path)
                       : parse_csv(spec.path, spec.label_column);
  return clean(table, spec.name);
}

inline ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("E_CONFIG", "cannot open config: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail("E_CONFIG", std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig config;
  try {
    if (!doc.contains("datasets") || !doc["datasets"].is_array() ||
        doc["datasets"].empty())
      fail("E_CONFIG", "config needs a non-empty 'datasets' array");
    for (const auto& entry : doc["datasets"]) {
      DatasetSpec spec;
      spec.path = entry.at("path").get<std::string>();
      spec.name = entry.value("name",
                              std::filesystem::path(spec.path).stem().string());
      const std::string format = entry.value("format", std::string("csv"));
      if (format == "csv") spec.format = DatasetSpec::Format::Csv;
      else if (format == "keel") spec.format = DatasetSpec::Format::Keel;
      else fail("E_CONFIG", "unknown dataset format: " + format);
      if (entry.contains("label_column"))
        spec.label_column = entry["label_column"].get<std::size_t>();
      if (!std::filesystem::exists(spec.path))
        fail("E_CONFIG", "dataset path does not exist: " + spec.path);
      config.datasets.push_back(std::move(spec));
    }

    for (const auto& name : doc.value("methods", std::vector<std::string>{}))
      config.methods.push_back(heuristic_from_string(name));

    if (doc.contains("scenarios")) {
      config.scenario_heuristic = false;
      config.scenario_gscv_default = false;
      config.scenario_gscv_seeded = false;
      for (const auto& entry : doc["scenarios"]) {
        const std::string s = entry.get<std::string>();
        if (s == "heuristic") config.scenario_heuristic = true;
        else if (s == "gscv_default") config.scenario_gscv_default = true;
        else if (s == "gscv_seeded") config.scenario_gscv_seeded = true;
        else fail("E_CONFIG", "unknown scenario: " + s);
      }
    }
    if ((config.scenario_heuristic || config.scenario_gscv_seeded) &&
        config.methods.empty())
      fail("E_CONFIG", "heuristic scenarios need a non-empty 'methods' list");
    if (!config.scenario_heuristic && !config.scenario_gscv_default &&
        !config.scenario_gscv_seeded)
      fail("E_CONFIG", "no scenarios selected");

    if (doc.contains("semi_supervised") && !doc["semi_supervised"].is_null()) {
      SemiSupervisedConfig semi;
      semi.fraction = doc["semi_supervised"].value("fraction", 0.1);
      semi.min_per_class = doc["semi_supervised"].value("min_per_class", 5);
      if (!(semi.fraction > 0.0 && semi.fraction <= 1.0))
        fail("E_CONFIG", "semi_supervised.fraction must be in (0, 1]");
      config.semi_supervised = semi;
    }

    if (doc.contains("cv")) {
      config.cv.k_external = doc["cv"].value("k_external", 5);
      config.cv.k_internal = doc["cv"].value("k_internal", 3);
      config.cv.repetitions = doc["cv"].value("repetitions", 10);
    }
    if (doc.contains("solver")) {
      config.solver.tolerance = doc["solver"].value("tolerance", 1e-3);
      config.solver.max_passes = doc["solver"].value("max_passes", 10);
    }
    config.base_seed = doc.value("base_seed", std::uint64_t{0});
    config.cv.base_seed = config.base_seed;
    config.solver.seed = config.base_seed;
    config.output_dir = doc.value("output_dir", std::string());
  } catch (const nlohmann::json::exception& e) {
    fail("E_CONFIG", std::string("bad config value: ") + e.what());
  }
  return config;
}

struct ExperimentOutput {
  std::vector<ExperimentReport> reports;
  std::vector<std::string> csv_paths;
  std::string summary_path;
  std::vector<std::string> warnings;
};

namespace detail {

struct RunTask {
  std::size_t dataset_index;
  bool semi = false;
  SelectionStrategy strategy;
};

inline std::vector<SelectionStrategy> strategy_list(const ExperimentConfig& config) {
  std::vector<SelectionStrategy> strategies;
  // The grid search around (1,1) doubles as the significance reference, so
  // it always runs first.
  strategies.push_back(SelectionStrategy::grid_default());
  if (config.scenario_heuristic)
    for (HeuristicId id : config.methods)
      strategies.push_back(SelectionStrategy::heuristic(id));
  if (config.scenario_gscv_seeded)
    for (HeuristicId id : config.methods)
      strategies.push_back(SelectionStrategy::grid_seeded(id));
  return strategies;
}

}  // namespace detail

inline ExperimentOutput run_experiment(const ExperimentConfig& config,
                                       int jobs = 1) {
  if (jobs < 1) fail("E_INVALID", "jobs must be >= 1");
  if (config.output_dir.empty()) fail("E_CONFIG", "output_dir not set");

  std::vector<Dataset> datasets;
  datasets.reserve(config.datasets.size());
  for (const DatasetSpec& spec : config.datasets)
    datasets.push_back(load_dataset(spec));

  const std::vector<SelectionStrategy> strategies = detail::strategy_list(config);
  std::vector<bool> modes{false};
  if (config.semi_supervised) modes.push_back(true);

  std::vector<detail::RunTask> tasks;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (bool semi : modes)
      for (const SelectionStrategy& strategy : strategies)
        tasks.push_back({d, semi, strategy});

  std::vector<RunScores> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const detail::RunTask& task = tasks[t];
        const Dataset& ds = datasets[task.dataset_index];
        results[t] = task.semi
                         ? run_semi_supervised(ds, task.strategy, config.cv,
                                               *config.semi_supervised,
                                               config.solver)
                         : run_external_cv(ds, task.strategy, config.cv,
                                           config.solver);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentOutput output;
  std::filesystem::create_directories(config.output_dir);

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    std::ostringstream csv;
    csv << kScoresCsvHeader << '\n';
    for (bool semi : modes) {
      std::vector<std::pair<std::string, RunScores>> methods;
      for (std::size_t t = 0; t < tasks.size(); ++t)
        if (tasks[t].dataset_index == d && tasks[t].semi == semi)
          methods.emplace_back(tasks[t].strategy.name(), results[t]);
      ExperimentReport report = compare_methods(
          datasets[d].name, semi ? "semi_supervised" : "supervised",
          std::move(methods), SelectionStrategy::grid_default().name());
      write_scores_csv(csv, report);
      for (const auto& [name, scores] : report.methods)
        for (const std::string& w : scores.warnings)
          output.warnings.push_back(datasets[d].name + "/" + name + ": " + w);
      output.reports.push_back(std::move(report));
    }
    const std::string path =
        (std::filesystem::path(config.output_dir) /
         (datasets[d].name + "_scores.csv")).string();
    write_text_atomic(path, csv.str());
    output.csv_paths.push_back(path);
  }

  output.summary_path =
      (std::filesystem::path(config.output_dir) / "summary.md").string();
  write_text_atomic(output.summary_path, markdown_summary(output.reports));
  return output;
}

}  // namespace svmtune
