#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/averaging.hpp"
#include "tsclust/distance.hpp"
#include "tsclust/series.hpp"

namespace tsclust {

enum class Algorithm { kmeans, kmedoids };
enum class Averaging { mean, dba };
enum class Init { forgy, random_partition };

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(Averaging a) noexcept;
std::string_view to_string(Init i) noexcept;
Algorithm parse_algorithm(std::string_view s);
Averaging parse_averaging(std::string_view s);
Init parse_init(std::string_view s);

struct ClusteringConfig {
  std::size_t k = 2;
  Algorithm algorithm = Algorithm::kmeans;
  Averaging averaging = Averaging::mean;
  DistanceSpec distance;
  std::size_t max_iters = 300;
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  Init init = Init::forgy;
  /// DBA refinement settings; the window is taken from `distance`.
  std::size_t dba_refinements = 10;
  double dba_tol = 1e-5;
  std::size_t threads = 1;

  void validate() const;
  /// `k=..;clusterer=..;averaging=..;...` appended to the distance string in
  /// results files.
  std::string canonical() const;
};

struct ClusterModel {
  ClusteringConfig config;
  /// Centroids for k-means, copies of the medoid series for k-medoids.
  std::vector<TimeSeries> exemplars;
  /// Training indices of the medoids (k-medoids only).
  std::vector<std::size_t> medoids;
  std::vector<int> assignments;
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  bool converged = false;
  std::size_t restart_chosen = 0;
  /// Inertia after each update step of the chosen restart.
  std::vector<double> inertia_history;
};

/// Fits k-means or k-medoids per `config.algorithm`. Labels never enter here.
ClusterModel fit(std::span<const TimeSeries> x, const ClusteringConfig& config);
ClusterModel kmeans_fit(std::span<const TimeSeries> x, ClusteringConfig config);
ClusterModel kmedoids_fit(std::span<const TimeSeries> x, ClusteringConfig config);

/// Nearest exemplar under the model's distance, ties to the lowest id.
std::vector<int> predict(const ClusterModel& model, std::span<const TimeSeries> x);

struct WindowTuning {
  double window = 0.0;
  ClusterModel model;
  std::vector<double> candidates;
  /// Davies-Bouldin score per candidate; NaN when the clustering was degenerate.
  std::vector<double> scores;
};

/// Fits at w = 0.0, 0.1, ..., 0.9 and keeps the clustering with the lowest
/// Davies-Bouldin index, or the highest when `prefer_highest` is set.
WindowTuning tune_dtw_window(std::span<const TimeSeries> x, const ClusteringConfig& config,
                             bool prefer_highest = false);

}  // namespace tsclust
