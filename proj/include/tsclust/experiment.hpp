#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsclust/clustering.hpp"
#include "tsclust/series.hpp"
#include "tsclust/stats.hpp"

namespace tsclust {

struct ExperimentConfig {
  std::filesystem::path train_path;
  std::optional<std::filesystem::path> test_path;
  /// k = 0 means "number of distinct training labels".
  ClusteringConfig clustering;
  bool normalize = true;
  std::size_t resample = 0;
  std::uint64_t base_seed = 1;
  std::filesystem::path out_dir = "results";
  bool overwrite = false;
  bool tune_window = false;
  bool tune_prefer_highest = false;
  /// Off by default so results files are byte-reproducible.
  bool record_timing = false;
};

/// `kmeans-msm`, `kmedoids-twe`, `kmeans-dba-dtw`, `...-tuned`.
std::string clusterer_name(const ClusteringConfig& config, bool tuned = false);

/// The fixed resample-to-seed mapping: base_seed + resample.
std::uint64_t resample_seed(std::uint64_t base_seed, std::size_t resample);

inline constexpr const char* kMetricNames[] = {"clacc", "ri",  "ari",    "mi",        "nmi",
                                               "ami",   "db",  "fit_ms", "predict_ms"};
inline constexpr std::size_t kMetricCount = 9;

struct EvalReport {
  std::string dataset;
  std::string clusterer;
  std::string split;  // "train" or "test"
  std::size_t resample = 0;
  std::uint64_t seed = 0;
  std::string parameters;
  /// In kMetricNames order.
  std::array<double, kMetricCount> metrics{};
  std::vector<std::string> true_labels;
  std::vector<int> assigned;

  double metric(std::string_view name) const;
};

/// Text form of a results file, byte-deterministic.
std::string format_results(const EvalReport& report);
EvalReport parse_results(std::string_view text);
EvalReport load_results(const std::filesystem::path& path);

/// Supervised scores recomputed from the per-case rows.
std::array<double, 6> recompute_supervised(const EvalReport& report);

/// Rejects training splits that cannot be clustered by class count rules
/// (a class with a single case).
void check_training_split(const Dataset& train);

struct ExperimentResult {
  EvalReport train;
  std::optional<EvalReport> test;
  std::filesystem::path train_file;
  std::optional<std::filesystem::path> test_file;
  ClusterModel model;
  double window_chosen = 0.0;
};

/// `<out>/<clusterer>/<dataset>/{train,test}Resample<r>.csv`.
std::filesystem::path results_path(const std::filesystem::path& out_dir, const std::string& clusterer,
                                   const std::string& dataset, const std::string& split,
                                   std::size_t resample);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct Collation {
  std::string split;
  /// One table per metric, keyed by metric name.
  std::map<std::string, ResultsTable> tables;
  std::vector<std::string> warnings;
  std::size_t files_read = 0;
};

/// Scans the directories for `<split>Resample*.csv` files, averages each
/// (dataset, clusterer) over resamples and drops datasets that miss a
/// clusterer or have a non-finite score.
Collation collate_results(const std::vector<std::filesystem::path>& dirs,
                          const std::string& split = "test");

/// `dataset,<alg>,...` CSV with %.6g values.
std::string format_table(const ResultsTable& table);
ResultsTable parse_table(std::string_view text);

/// Metrics where lower is better get negated so "higher is better" holds.
bool lower_is_better(std::string_view metric);
ResultsTable oriented_for_ranking(ResultsTable table, std::string_view metric);

}  // namespace tsclust
