#include "tsclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "parallel.hpp"
#include "random.hpp"
#include "tsclust/error.hpp"
#include "tsclust/metrics.hpp"

namespace tsclust {

std::string_view to_string(Algorithm a) noexcept {
  return a == Algorithm::kmeans ? "kmeans" : "kmedoids";
}
std::string_view to_string(Averaging a) noexcept { return a == Averaging::mean ? "mean" : "dba"; }
std::string_view to_string(Init i) noexcept {
  return i == Init::forgy ? "forgy" : "random_partition";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "kmeans") return Algorithm::kmeans;
  if (s == "kmedoids") return Algorithm::kmedoids;
  fail(ErrorCode::invalid_input, "unknown clusterer '" + std::string(s) + "'");
}
Averaging parse_averaging(std::string_view s) {
  if (s == "mean") return Averaging::mean;
  if (s == "dba") return Averaging::dba;
  fail(ErrorCode::invalid_input, "unknown averaging '" + std::string(s) + "'");
}
Init parse_init(std::string_view s) {
  if (s == "forgy") return Init::forgy;
  if (s == "random_partition") return Init::random_partition;
  fail(ErrorCode::invalid_input, "unknown init '" + std::string(s) + "'");
}

void ClusteringConfig::validate() const {
  if (k < 1) fail(ErrorCode::invalid_input, "k must be at least 1");
  if (max_iters < 1) fail(ErrorCode::invalid_input, "max_iters must be at least 1");
  if (restarts < 1) fail(ErrorCode::invalid_input, "restarts must be at least 1");
  if (dba_refinements < 1) fail(ErrorCode::invalid_input, "dba refinements must be at least 1");
  distance.validate();
}

std::string ClusteringConfig::canonical() const {
  char tol[32];
  std::snprintf(tol, sizeof tol, "%.6g", dba_tol);
  std::string s = "k=" + std::to_string(k) + ";clusterer=" + std::string(to_string(algorithm));
  if (algorithm == Algorithm::kmeans) s += ";averaging=" + std::string(to_string(averaging));
  s += ";max_iters=" + std::to_string(max_iters) + ";restarts=" + std::to_string(restarts) +
       ";seed=" + std::to_string(seed) + ";init=" + std::string(to_string(init));
  if (algorithm == Algorithm::kmeans && averaging == Averaging::dba)
    s += ";dba_refinements=" + std::to_string(dba_refinements) + ";dba_tol=" + tol;
  return s;
}

namespace {

void check_input(std::span<const TimeSeries> x, const ClusteringConfig& config) {
  config.validate();
  if (x.empty()) fail(ErrorCode::empty_input, "cannot cluster an empty dataset");
  if (config.k > x.size())
    fail(ErrorCode::invalid_input, "k (" + std::to_string(config.k) +
                                       ") exceeds the number of series (" +
                                       std::to_string(x.size()) + ")");
  const std::size_t m = x.front().size();
  for (const auto& s : x)
    if (s.size() != m) fail(ErrorCode::unsupported_dataset, "series differ in length");
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
  return std::mt19937_64(detail::mix_seed(detail::mix_seed(seed) + restart));
}

/// k distinct indices by a partial Fisher-Yates shuffle.
std::vector<std::size_t> forgy_indices(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick = t + detail::uniform_index(rng, n - t);
    std::swap(idx[t], idx[pick]);
  }
  idx.resize(k);
  return idx;
}

/// Random cluster ids with every cluster guaranteed one member: a shuffled
/// set of k cases seeds the clusters, the rest draw uniformly.
std::vector<int> random_partition(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  const auto seeds = forgy_indices(rng, n, k);
  std::vector<int> assign(n, -1);
  for (std::size_t c = 0; c < k; ++c) assign[seeds[c]] = static_cast<int>(c);
  for (auto& a : assign)
    if (a < 0) a = static_cast<int>(detail::uniform_index(rng, k));
  return assign;
}

struct Assignment {
  std::vector<int> cluster;
  std::vector<double> dist;
};

/// dist(i, c) supplied by the caller; ties go to the lowest cluster id.
template <class DistFn>
Assignment assign_nearest(std::size_t n, std::size_t k, std::size_t threads, DistFn&& dist) {
  Assignment a{std::vector<int>(n, 0), std::vector<double>(n, 0.0)};
  detail::parallel_for(n, threads, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = dist(i, c);
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    a.cluster[i] = arg;
    a.dist[i] = best;
  });
  return a;
}

/// Gives each empty cluster the case farthest from its exemplar, taken from
/// a cluster that can spare it. Returns the (cluster, case) moves made.
std::vector<std::pair<std::size_t, std::size_t>> repair_empty(Assignment& a, std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> moves;
  std::vector<std::size_t> sizes(k, 0);
  for (int c : a.cluster) ++sizes[static_cast<std::size_t>(c)];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = a.cluster.size();
    for (std::size_t i = 0; i < a.cluster.size(); ++i) {
      if (sizes[static_cast<std::size_t>(a.cluster[i])] < 2) continue;
      if (far == a.cluster.size() || a.dist[i] > a.dist[far]) far = i;
    }
    --sizes[static_cast<std::size_t>(a.cluster[far])];
    ++sizes[c];
    a.cluster[far] = static_cast<int>(c);
    a.dist[far] = 0.0;
    moves.emplace_back(c, far);
  }
  return moves;
}

std::vector<std::vector<std::size_t>> members_of(const std::vector<int>& assign, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assign.size(); ++i)
    out[static_cast<std::size_t>(assign[i])].push_back(i);
  return out;
}

struct RestartResult {
  std::vector<TimeSeries> exemplars;
  std::vector<std::size_t> medoids;
  std::vector<int> assignments;
  double inertia = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

ClusterModel pick_best(std::vector<RestartResult> runs, const ClusteringConfig& config) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  auto& run = runs[best];
  ClusterModel model;
  model.config = config;
  model.exemplars = std::move(run.exemplars);
  model.medoids = std::move(run.medoids);
  model.assignments = std::move(run.assignments);
  model.inertia = run.inertia;
  model.iterations_run = run.iterations;
  model.converged = run.converged;
  model.restart_chosen = best;
  model.inertia_history = std::move(run.history);
  return model;
}

RestartResult kmeans_restart(std::span<const TimeSeries> x, const ClusteringConfig& config,
                             const Distance& dist, std::size_t restart) {
  const std::size_t n = x.size();
  const std::size_t k = config.k;
  auto rng = restart_rng(config.seed, restart);

  std::vector<std::vector<double>> prepared(n);
  for (std::size_t i = 0; i < n; ++i) prepared[i] = dist.prepare(x[i].values());

  RestartResult run;
  std::vector<std::vector<double>> prepared_ex(k);
  auto set_exemplar = [&](std::size_t c, TimeSeries s) {
    prepared_ex[c] = dist.prepare(s.values());
    run.exemplars[c] = std::move(s);
  };
  auto distance_to = [&](std::size_t i, std::size_t c) {
    return dist.prepared(prepared[i], prepared_ex[c]);
  };

  BarycentreConfig bc;
  bc.max_refinements = config.dba_refinements;
  bc.convergence_tol = config.dba_tol;
  bc.window = config.distance.window;

  auto update = [&](const std::vector<int>& assign) {
    const auto members = members_of(assign, k);
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<TimeSeries> cluster;
      cluster.reserve(members[c].size());
      for (std::size_t i : members[c]) cluster.push_back(x[i]);
      if (config.averaging == Averaging::mean) {
        set_exemplar(c, mean_average(cluster));
      } else {
        set_exemplar(c, dba(cluster, bc, run.exemplars[c]).centre);
      }
    }
  };
  auto inertia_of = [&](const std::vector<int>& assign) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += distance_to(i, static_cast<std::size_t>(assign[i]));
    return s;
  };

  run.exemplars.resize(k);
  Assignment current;
  if (config.init == Init::forgy) {
    const auto picks = forgy_indices(rng, n, k);
    for (std::size_t c = 0; c < k; ++c) set_exemplar(c, x[picks[c]]);
    current = assign_nearest(n, k, config.threads, distance_to);
    for (auto [c, i] : repair_empty(current, k)) set_exemplar(c, x[i]);
  } else {
    current.cluster = random_partition(rng, n, k);
    // DBA needs a starting centre per cluster; use its first member.
    const auto members = members_of(current.cluster, k);
    for (std::size_t c = 0; c < k; ++c) set_exemplar(c, x[members[c].front()]);
  }

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    update(current.cluster);
    run.history.push_back(inertia_of(current.cluster));
    run.iterations = iter;
    Assignment next = assign_nearest(n, k, config.threads, distance_to);
    for (auto [c, i] : repair_empty(next, k)) set_exemplar(c, x[i]);
    if (next.cluster == current.cluster) {
      run.converged = true;
      break;
    }
    current = std::move(next);
  }
  run.assignments = current.cluster;
  run.inertia = inertia_of(run.assignments);
  return run;
}

RestartResult kmedoids_restart(const DistanceMatrix& d, const ClusteringConfig& config,
                               std::size_t restart) {
  const std::size_t n = d.rows();
  const std::size_t k = config.k;
  auto rng = restart_rng(config.seed, restart);

  RestartResult run;
  run.medoids.assign(k, 0);
  auto distance_to = [&](std::size_t i, std::size_t c) { return d(i, run.medoids[c]); };

  auto update = [&](const std::vector<int>& assign) {
    const auto members = members_of(assign, k);
    for (std::size_t c = 0; c < k; ++c) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = members[c].front();
      for (std::size_t cand : members[c]) {  // members are in increasing order
        double total = 0.0;
        for (std::size_t i : members[c]) total += d(i, cand);
        if (total < best) {
          best = total;
          arg = cand;
        }
      }
      run.medoids[c] = arg;
    }
  };
  auto inertia_of = [&](const std::vector<int>& assign) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += distance_to(i, static_cast<std::size_t>(assign[i]));
    return s;
  };

  Assignment current;
  if (config.init == Init::forgy) {
    run.medoids = forgy_indices(rng, n, k);
    current = assign_nearest(n, k, 1, distance_to);
    for (auto [c, i] : repair_empty(current, k)) run.medoids[c] = i;
  } else {
    current.cluster = random_partition(rng, n, k);
  }

  for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
    update(current.cluster);
    run.history.push_back(inertia_of(current.cluster));
    run.iterations = iter;
    Assignment next = assign_nearest(n, k, 1, distance_to);
    for (auto [c, i] : repair_empty(next, k)) run.medoids[c] = i;
    if (next.cluster == current.cluster) {
      run.converged = true;
      break;
    }
    current = std::move(next);
  }
  run.assignments = current.cluster;
  run.inertia = inertia_of(run.assignments);
  return run;
}

}  // namespace

ClusterModel kmeans_fit(std::span<const TimeSeries> x, ClusteringConfig config) {
  config.algorithm = Algorithm::kmeans;
  check_input(x, config);
  const Distance dist(config.distance);
  std::vector<RestartResult> runs;
  runs.reserve(config.restarts);
  for (std::size_t r = 0; r < config.restarts; ++r)
    runs.push_back(kmeans_restart(x, config, dist, r));
  return pick_best(std::move(runs), config);
}

ClusterModel kmedoids_fit(std::span<const TimeSeries> x, ClusteringConfig config) {
  config.algorithm = Algorithm::kmedoids;
  check_input(x, config);
  const DistanceMatrix d = pairwise_distance(x, config.distance, config.threads);
  std::vector<RestartResult> runs;
  runs.reserve(config.restarts);
  for (std::size_t r = 0; r < config.restarts; ++r) runs.push_back(kmedoids_restart(d, config, r));
  ClusterModel model = pick_best(std::move(runs), config);
  for (std::size_t m : model.medoids) model.exemplars.push_back(x[m]);
  return model;
}

ClusterModel fit(std::span<const TimeSeries> x, const ClusteringConfig& config) {
  return config.algorithm == Algorithm::kmeans ? kmeans_fit(x, config) : kmedoids_fit(x, config);
}

std::vector<int> predict(const ClusterModel& model, std::span<const TimeSeries> x) {
  if (model.exemplars.empty()) fail(ErrorCode::invalid_input, "model has no exemplars");
  const std::size_t m = model.exemplars.front().size();
  for (const auto& s : x)
    if (s.size() != m)
      fail(ErrorCode::shape_mismatch, "series length " + std::to_string(s.size()) +
                                          " differs from training length " + std::to_string(m));
  const Distance dist(model.config.distance);
  std::vector<std::vector<double>> ex(model.exemplars.size());
  for (std::size_t c = 0; c < ex.size(); ++c) ex[c] = dist.prepare(model.exemplars[c].values());
  std::vector<std::vector<double>> px(x.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = dist.prepare(x[i].values());
  return assign_nearest(x.size(), ex.size(), model.config.threads,
                        [&](std::size_t i, std::size_t c) { return dist.prepared(px[i], ex[c]); })
      .cluster;
}

WindowTuning tune_dtw_window(std::span<const TimeSeries> x, const ClusteringConfig& config,
                             bool prefer_highest) {
  const Measure m = config.distance.measure;
  if (m != Measure::dtw && m != Measure::ddtw)
    fail(ErrorCode::invalid_input, "window tuning needs a banded measure (dtw or ddtw)");
  WindowTuning out;
  bool have = false;
  double best_score = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double w = i / 10.0;
    ClusteringConfig c = config;
    c.distance.window = w;
    ClusterModel model = fit(x, c);
    double score = std::numeric_limits<double>::quiet_NaN();
    try {
      score = davies_bouldin(x, model.assignments);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate && e.code() != ErrorCode::invalid_input) throw;
    }
    out.candidates.push_back(w);
    out.scores.push_back(score);
    // Degenerate clusterings rank last; strict comparison keeps the smaller w on ties.
    const bool better = !std::isnan(score) &&
                        (!have || std::isnan(best_score) ||
                         (prefer_highest ? score > best_score : score < best_score));
    if (!have || better) {
      have = true;
      best_score = score;
      out.window = w;
      out.model = std::move(model);
    }
  }
  return out;
}

}  // namespace tsclust
