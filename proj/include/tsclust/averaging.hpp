#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tsclust/series.hpp"

namespace tsclust {

struct BarycentreConfig {
  std::size_t max_refinements = 10;
  double convergence_tol = 1e-5;
  double window = 0.2;

  void validate() const;
};

struct BarycentreResult {
  TimeSeries centre;
  /// Sum of dtw(member, centre) measured before each refinement, plus one
  /// final entry for the returned centre.
  std::vector<double> cost_history;
  std::size_t refinements = 0;
};

/// Elementwise mean. Throws empty_input / shape_mismatch.
TimeSeries mean_average(std::span<const TimeSeries> cluster);

/// Values each centre position receives when every member is warped onto
/// `centre` with a banded DTW path.
std::vector<std::vector<double>> dba_buckets(const TimeSeries& centre,
                                             std::span<const TimeSeries> cluster,
                                             double window);

/// One barycentre update: the per-position mean of `dba_buckets`.
TimeSeries dba_step(const TimeSeries& centre, std::span<const TimeSeries> cluster,
                    double window);

/// Refines from `initial` (or a seeded random member) until the largest
/// per-position change falls below the tolerance.
BarycentreResult dba(std::span<const TimeSeries> cluster, const BarycentreConfig& config,
                     const std::optional<TimeSeries>& initial = std::nullopt,
                     std::uint64_t seed = 1);

}  // namespace tsclust
