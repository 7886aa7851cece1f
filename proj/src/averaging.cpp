#include "tsclust/averaging.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "random.hpp"
#include "tsclust/distance.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

namespace {

void check_cluster(std::span<const TimeSeries> cluster, std::size_t m) {
  if (cluster.empty()) fail(ErrorCode::empty_input, "cannot average an empty cluster");
  for (const auto& x : cluster) {
    if (x.size() != m) fail(ErrorCode::shape_mismatch, "cluster members differ in length");
  }
}

DistanceSpec dtw_spec(double window) {
  DistanceSpec s;
  s.measure = Measure::dtw;
  s.window = window;
  return s;
}

double total_cost(const TimeSeries& centre, std::span<const TimeSeries> cluster, double window) {
  double sum = 0.0;
  for (const auto& x : cluster) sum += dtw(x, centre, window);
  return sum;
}

}  // namespace

void BarycentreConfig::validate() const {
  if (max_refinements < 1) fail(ErrorCode::invalid_input, "max_refinements must be at least 1");
  if (!(convergence_tol >= 0.0)) fail(ErrorCode::invalid_input, "convergence_tol must be >= 0");
  if (!(window >= 0.0 && window <= 1.0)) fail(ErrorCode::invalid_input, "window must be in [0,1]");
}

TimeSeries mean_average(std::span<const TimeSeries> cluster) {
  if (cluster.empty()) fail(ErrorCode::empty_input, "cannot average an empty cluster");
  const std::size_t m = cluster.front().size();
  check_cluster(cluster, m);
  std::vector<double> sum(m, 0.0);
  for (const auto& x : cluster)
    for (std::size_t t = 0; t < m; ++t) sum[t] += x[t];
  for (auto& v : sum) v /= static_cast<double>(cluster.size());
  return TimeSeries(std::move(sum));
}

std::vector<std::vector<double>> dba_buckets(const TimeSeries& centre,
                                             std::span<const TimeSeries> cluster,
                                             double window) {
  check_cluster(cluster, centre.size());
  const DistanceSpec spec = dtw_spec(window);
  std::vector<std::vector<double>> buckets(centre.size());
  for (const auto& x : cluster) {
    const auto r = alignment_path(centre, x, spec);
    for (auto [i, j] : r.path) buckets[i - 1].push_back(x[j - 1]);
  }
  return buckets;
}

TimeSeries dba_step(const TimeSeries& centre, std::span<const TimeSeries> cluster,
                    double window) {
  const auto buckets = dba_buckets(centre, cluster, window);
  std::vector<double> out(centre.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // A valid path visits every row, so no bucket is empty.
    assert(!buckets[i].empty());
    double s = 0.0;
    for (double v : buckets[i]) s += v;
    out[i] = s / static_cast<double>(buckets[i].size());
  }
  return TimeSeries(std::move(out));
}

BarycentreResult dba(std::span<const TimeSeries> cluster, const BarycentreConfig& config,
                     const std::optional<TimeSeries>& initial, std::uint64_t seed) {
  config.validate();
  if (cluster.empty()) fail(ErrorCode::empty_input, "cannot average an empty cluster");
  BarycentreResult out;
  if (initial) {
    out.centre = *initial;
  } else {
    std::mt19937_64 rng(detail::mix_seed(seed));
    out.centre = cluster[detail::uniform_index(rng, cluster.size())];
  }
  check_cluster(cluster, out.centre.size());

  for (std::size_t step = 0; step < config.max_refinements; ++step) {
    out.cost_history.push_back(total_cost(out.centre, cluster, config.window));
    TimeSeries next = dba_step(out.centre, cluster, config.window);
    double change = 0.0;
    for (std::size_t t = 0; t < next.size(); ++t)
      change = std::max(change, std::abs(next[t] - out.centre[t]));
    out.centre = std::move(next);
    ++out.refinements;
    if (change < config.convergence_tol) break;
  }
  out.cost_history.push_back(total_cost(out.centre, cluster, config.window));
  return out;
}

}  // namespace tsclust
