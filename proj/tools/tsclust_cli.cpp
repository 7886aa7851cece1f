// Command-line front end. Talks to the library only through tsclust.h.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsclust/tsclust.h"

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tsc_status s) {
  if (s != TSC_OK) throw Failure(tsc_status_string(s) + std::string(": ") + tsc_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using DistancePtr = std::unique_ptr<tsc_distance, Deleter<tsc_distance, tsc_distance_destroy>>;
using DatasetPtr = std::unique_ptr<tsc_dataset, Deleter<tsc_dataset, tsc_dataset_destroy>>;
using ModelPtr = std::unique_ptr<tsc_model, Deleter<tsc_model, tsc_model_destroy>>;
using ExperimentPtr = std::unique_ptr<tsc_experiment, Deleter<tsc_experiment, tsc_experiment_destroy>>;
using CollationPtr = std::unique_ptr<tsc_collation, Deleter<tsc_collation, tsc_collation_destroy>>;
using CdPtr = std::unique_ptr<tsc_cd_result, Deleter<tsc_cd_result, tsc_cd_destroy>>;

std::string real(double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

struct DistanceOpts {
  std::string metric = "dtw";
  tsc_distance_params p{};

  DistanceOpts() { tsc_distance_params_init(&p); }

  void add(CLI::App* app) {
    app->add_option("--metric", metric, "ed dtw ddtw wdtw wddtw lcss edr erp msm twe")
        ->capture_default_str();
    app->add_option("--window", p.window, "Sakoe-Chiba window fraction (dtw, ddtw)")->capture_default_str();
    app->add_option("--g", p.g, "WDTW weight steepness")->capture_default_str();
    app->add_option("--epsilon", p.epsilon, "LCSS/EDR match threshold")->capture_default_str();
    app->add_option("--gap", p.gap, "ERP gap value")->capture_default_str();
    app->add_option("--cost", p.cost, "MSM split/merge cost")->capture_default_str();
    app->add_option("--nu", p.nu, "TWE stiffness")->capture_default_str();
    app->add_option("--lambda", p.lambda, "TWE edit penalty")->capture_default_str();
    app->add_flag("--edr-normalize", p.edr_normalize, "divide EDR by the series length");
  }

  DistancePtr make() {
    p.metric = metric.c_str();
    tsc_distance* d = nullptr;
    check(tsc_distance_create(&p, &d));
    return DistancePtr(d);
  }
};

struct ClusterOpts {
  tsc_cluster_params p{};
  std::string clusterer = "kmeans";
  std::string averaging = "mean";
  std::string init = "forgy";

  ClusterOpts() {
    tsc_cluster_params_init(&p);
    p.k = 0;
  }

  void add(CLI::App* app) {
    app->add_option("--clusterer", clusterer, "kmeans | kmedoids")->capture_default_str();
    app->add_option("--averaging", averaging, "mean | dba (kmeans only)")->capture_default_str();
    app->add_option("--init", init, "forgy | random_partition")->capture_default_str();
    app->add_option("--k", p.k, "number of clusters; 0 = number of classes")->capture_default_str();
    app->add_option("--restarts", p.restarts)->capture_default_str();
    app->add_option("--max-iters", p.max_iters)->capture_default_str();
    app->add_option("--threads", p.threads)->capture_default_str();
  }

  const tsc_cluster_params& get() {
    p.clusterer = clusterer.c_str();
    p.averaging = averaging.c_str();
    p.init = init.c_str();
    return p;
  }
};

DatasetPtr load(const std::string& path, bool normalize) {
  tsc_dataset* d = nullptr;
  check(tsc_dataset_load(path.c_str(), &d));
  DatasetPtr raw(d);
  if (!normalize) return raw;
  tsc_dataset* z = nullptr;
  check(tsc_dataset_normalize(raw.get(), &z));
  return DatasetPtr(z);
}

std::vector<double> load_series(const std::string& path) {
  std::size_t len = 0;
  const tsc_status probe = tsc_load_series(path.c_str(), nullptr, 0, &len);
  if (probe != TSC_ERR_BUFFER_TOO_SMALL) check(probe);
  std::vector<double> v(len);
  check(tsc_load_series(path.c_str(), v.data(), v.size(), &len));
  return v;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Failure("cannot write '" + path + "'");
  out << text;
}

int cmd_dist(DistanceOpts& dopt, const std::string& a_path, const std::string& b_path, bool path) {
  const auto d = dopt.make();
  const auto a = load_series(a_path);
  const auto b = load_series(b_path);
  if (a.size() != b.size())
    throw Failure("series lengths differ (" + std::to_string(a.size()) + " vs " +
                  std::to_string(b.size()) + ")");
  double dist = 0.0;
  check(tsc_distance_eval(d.get(), a.data(), b.data(), a.size(), &dist));
  std::cout << real(dist) << "\n";
  if (path) {
    std::size_t len = 0;
    const tsc_status probe = tsc_distance_path(d.get(), a.data(), b.data(), a.size(), nullptr, 0, &len, nullptr);
    if (probe != TSC_ERR_BUFFER_TOO_SMALL) check(probe);
    std::vector<std::size_t> pairs(2 * len);
    check(tsc_distance_path(d.get(), a.data(), b.data(), a.size(), pairs.data(), len, &len, nullptr));
    for (std::size_t t = 0; t < len; ++t)
      std::cout << "(" << pairs[2 * t] << "," << pairs[2 * t + 1] << ")" << (t + 1 < len ? " " : "\n");
  }
  return 0;
}

int cmd_pairwise(DistanceOpts& dopt, const std::string& data_path, const std::string& other,
                 bool normalize, std::size_t threads, const std::string& out) {
  const auto d = dopt.make();
  const auto x = load(data_path, normalize);
  DatasetPtr y;
  if (!other.empty()) y = load(other, normalize);
  const std::size_t rows = tsc_dataset_size(x.get());
  const std::size_t cols = y ? tsc_dataset_size(y.get()) : rows;
  std::vector<double> m(rows * cols);
  check(tsc_pairwise(d.get(), x.get(), y.get(), threads, m.data(), m.size()));
  std::string text;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) text += (j ? "," : "") + real(m[i * cols + j], "%.17g");
    text += "\n";
  }
  write_or_print(out, text);
  return 0;
}

int cmd_cluster(DistanceOpts& dopt, ClusterOpts& copt, const std::string& data_path, bool normalize,
                bool tune, bool tune_highest, const std::string& out) {
  auto d = dopt.make();
  const auto x = load(data_path, normalize);
  auto params = copt.get();
  const std::size_t n = tsc_dataset_size(x.get());
  if (params.k == 0) {
    params.k = tsc_dataset_class_count(x.get());
    if (params.k == 0) throw Failure("--k is required for unlabelled data");
  }
  tsc_model* raw = nullptr;
  double window = -1;
  if (tune) {
    check(tsc_tune_window(x.get(), d.get(), &params, tune_highest ? 1 : 0, &window, &raw));
  } else {
    check(tsc_fit(x.get(), d.get(), &params, &raw));
  }
  ModelPtr model(raw);
  std::vector<int> assign(n);
  check(tsc_model_assignments(model.get(), assign.data(), assign.size()));

  std::cout << "dataset: " << tsc_dataset_name(x.get()) << "\n";
  std::cout << "k: " << tsc_model_k(model.get()) << "\n";
  if (tune) std::cout << "window: " << real(window) << "\n";
  std::cout << "inertia: " << real(tsc_model_inertia(model.get())) << "\n";
  std::cout << "iterations: " << tsc_model_iterations(model.get()) << "\n";
  std::cout << "converged: " << (tsc_model_converged(model.get()) ? "yes" : "no") << "\n";
  if (tsc_dataset_has_labels(x.get())) {
    std::vector<int> truth(n);
    check(tsc_dataset_label_codes(x.get(), truth.data(), truth.size()));
    tsc_scores s{};
    check(tsc_evaluate(truth.data(), assign.data(), n, &s));
    std::cout << "clacc: " << real(s.clacc, "%.6g") << "\nri: " << real(s.ri, "%.6g")
              << "\nari: " << real(s.ari, "%.6g") << "\nmi: " << real(s.mi, "%.6g")
              << "\nnmi: " << real(s.nmi, "%.6g") << "\nami: " << real(s.ami, "%.6g") << "\n";
  }
  double db = 0;
  if (tsc_davies_bouldin(x.get(), assign.data(), n, &db) == TSC_OK)
    std::cout << "db: " << real(db, "%.6g") << "\n";
  std::string rows;
  for (std::size_t i = 0; i < n; ++i) {
    const char* label = tsc_dataset_label(x.get(), i);
    rows += (label ? std::string(label) + "," : std::string()) + std::to_string(assign[i]) + "\n";
  }
  if (!out.empty()) write_or_print(out, rows);
  return 0;
}

struct ExperimentOpts {
  tsc_experiment_params p{};
  std::string train, test, out = "results";
  ExperimentOpts() { tsc_experiment_params_init(&p); }
};

int cmd_experiment(DistanceOpts& dopt, ClusterOpts& copt, ExperimentOpts& e) {
  auto d = dopt.make();
  e.p.train_path = e.train.c_str();
  e.p.test_path = e.test.empty() ? nullptr : e.test.c_str();
  e.p.out_dir = e.out.c_str();
  const auto params = copt.get();
  tsc_experiment* raw = nullptr;
  check(tsc_experiment_run(&e.p, d.get(), &params, &raw));
  ExperimentPtr ex(raw);
  for (int split = 0; split < 2; ++split) {
    const char* file = tsc_experiment_file(ex.get(), split);
    if (!file) continue;
    std::vector<double> m(tsc_metric_count());
    check(tsc_experiment_metrics(ex.get(), split, m.data()));
    std::cout << (split == 0 ? "train" : "test") << ": " << file << "\n";
    for (std::size_t i = 0; i < 7; ++i)
      std::cout << "  " << tsc_metric_name(i) << " " << real(m[i], "%.6g") << "\n";
  }
  if (e.p.tune_window) std::cout << "window: " << real(tsc_experiment_window(ex.get())) << "\n";
  return 0;
}

CollationPtr collate(const std::vector<std::string>& dirs, const std::string& split) {
  std::vector<const char*> c;
  for (const auto& s : dirs) c.push_back(s.c_str());
  tsc_collation* raw = nullptr;
  check(tsc_collate(c.data(), c.size(), split.c_str(), &raw));
  CollationPtr out(raw);
  for (std::size_t i = 0; i < tsc_collation_warning_count(out.get()); ++i)
    std::cerr << "warning: " << tsc_collation_warning(out.get(), i) << "\n";
  return out;
}

int cmd_collate(const std::vector<std::string>& dirs, const std::string& split,
                const std::string& metric, const std::string& out) {
  const auto c = collate(dirs, split);
  std::vector<std::string> metrics;
  if (metric.empty()) {
    for (std::size_t i = 0; i < tsc_metric_count(); ++i) metrics.emplace_back(tsc_metric_name(i));
  } else {
    metrics.push_back(metric);
  }
  for (const auto& m : metrics) {
    const char* table = tsc_collation_table(c.get(), m.c_str());
    if (!table) throw Failure("unknown metric '" + m + "'");
    if (out.empty()) {
      std::cout << "# " << m << "\n" << table;
    } else {
      write_or_print((std::filesystem::path(out) / (split + "_" + m + ".csv")).string(), table);
    }
  }
  return 0;
}

bool looks_like_table(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) return false;
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first.rfind("dataset,", 0) == 0;
}

int cmd_rank(const std::vector<std::string>& inputs, const std::string& split,
             const std::string& metric, double alpha, const std::string& json,
             const std::string& svg) {
  tsc_cd_result* raw = nullptr;
  if (inputs.size() == 1 && looks_like_table(inputs[0])) {
    std::ifstream in(inputs[0]);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    check(tsc_rank_table(text.c_str(), metric.c_str(), alpha, &raw));
  } else {
    const auto c = collate(inputs, split);
    check(tsc_rank(c.get(), metric.c_str(), alpha, &raw));
  }
  CdPtr cd(raw);
  std::cout << tsc_cd_text(cd.get());
  if (!json.empty()) write_or_print(json, tsc_cd_json(cd.get()));
  if (!svg.empty()) write_or_print(svg, tsc_cd_svg(cd.get()));
  return 0;
}

int cmd_bench(DistanceOpts& dopt, const std::vector<std::size_t>& lengths, std::size_t reps,
              std::uint64_t seed) {
  const auto d = dopt.make();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (std::size_t m : lengths) {
    std::vector<double> a(m), b(m);
    for (auto& v : a) v = n01(rng);
    for (auto& v : b) v = n01(rng);
    double sink = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < reps; ++r) {
      double v = 0.0;
      check(tsc_distance_eval(d.get(), a.data(), b.data(), m, &v));
      sink += v;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (lengths.size() == 1) {
      std::cout << real(secs, "%.6f") << "\n";
    } else {
      std::cout << m << " " << real(secs, "%.6f") << "\n";
    }
    if (sink < 0) std::cerr << "";  // keeps the loop from being optimised away
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic distances and partitional clustering for time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsc_version()));

  DistanceOpts dopt;
  ClusterOpts copt;
  ExperimentOpts eopt;
  bool no_normalize = false, show_path = false, tune = false, tune_highest = false;
  std::string a_path, b_path, data_path, other_path, out, split = "test", metric, json, svg;
  std::vector<std::string> inputs;
  std::size_t threads = 1, reps = 200;
  std::vector<std::size_t> lengths{1000};
  std::uint64_t seed = 1;
  double alpha = 0.05;

  auto* dist = app.add_subcommand("dist", "distance between two series files");
  dopt.add(dist);
  dist->add_option("a", a_path, "first series file")->required();
  dist->add_option("b", b_path, "second series file")->required();
  dist->add_flag("--path", show_path, "also print the warping path (ed and DTW family)");

  auto* pairwise = app.add_subcommand("pairwise", "pairwise distance matrix of a dataset");
  dopt.add(pairwise);
  pairwise->add_option("data", data_path, "dataset file")->required();
  pairwise->add_option("--against", other_path, "second dataset for a rectangular matrix");
  pairwise->add_option("--out", out, "output CSV (stdout if omitted)");
  pairwise->add_option("--threads", threads)->capture_default_str();
  pairwise->add_flag("--no-normalize", no_normalize);

  auto* cluster = app.add_subcommand("cluster", "fit a clusterer on one dataset and report");
  dopt.add(cluster);
  copt.add(cluster);
  cluster->add_option("data", data_path, "dataset file")->required();
  cluster->add_option("--seed", copt.p.seed)->capture_default_str();
  cluster->add_option("--out", out, "write label,cluster rows here");
  cluster->add_flag("--no-normalize", no_normalize);
  cluster->add_flag("--tune-window", tune, "choose the DTW window by Davies-Bouldin");
  cluster->add_flag("--tune-highest", tune_highest, "pick the highest Davies-Bouldin instead");

  auto* experiment = app.add_subcommand("experiment", "train/test run writing results files");
  dopt.add(experiment);
  copt.add(experiment);
  experiment->add_option("--train", eopt.train, "training split")->required();
  experiment->add_option("--test", eopt.test, "test split");
  experiment->add_option("--out", eopt.out, "results directory")->capture_default_str();
  experiment->add_option("--seed", eopt.p.base_seed, "base seed; the run uses seed + resample")
      ->capture_default_str();
  experiment->add_option("--resample", eopt.p.resample)->capture_default_str();
  experiment->add_flag("--overwrite", eopt.p.overwrite);
  experiment->add_flag("--record-timing", eopt.p.record_timing,
                       "write wall-clock times (results stop being byte-reproducible)");
  experiment->add_flag("--tune-window", eopt.p.tune_window);
  experiment->add_flag("--tune-highest", eopt.p.tune_prefer_highest);
  bool exp_no_normalize = false;
  experiment->add_flag("--no-normalize", exp_no_normalize);

  auto* coll = app.add_subcommand("collate", "average results files into per-metric tables");
  coll->add_option("dirs", inputs, "results directories")->required();
  coll->add_option("--split", split)->capture_default_str();
  coll->add_option("--metric", metric, "one metric only");
  coll->add_option("--out", out, "directory for <split>_<metric>.csv (stdout if omitted)");

  auto* rank = app.add_subcommand("rank", "average ranks, Wilcoxon/Holm cliques");
  rank->add_option("inputs", inputs, "results directories or one collated table")->required();
  rank->add_option("--metric", metric, "clacc ri ari mi nmi ami db")->required();
  rank->add_option("--split", split)->capture_default_str();
  rank->add_option("--alpha", alpha)->capture_default_str();
  rank->add_option("--json", json, "write the summary record here");
  rank->add_option("--svg", svg, "write a diagram here");

  auto* bench = app.add_subcommand("bench", "time repeated distance calls on random series");
  dopt.add(bench);
  bench->add_option("--length", lengths, "series length(s)")->capture_default_str();
  bench->add_option("--reps", reps)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  // Timing comparisons use the full window unless told otherwise.
  bench->parse_complete_callback([&] {
    if (bench->count("--window") == 0) dopt.p.window = 1.0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 2;
  }

  try {
    if (*dist) return cmd_dist(dopt, a_path, b_path, show_path);
    if (*pairwise) return cmd_pairwise(dopt, data_path, other_path, !no_normalize, threads, out);
    if (*cluster) return cmd_cluster(dopt, copt, data_path, !no_normalize, tune, tune_highest, out);
    if (*experiment) {
      eopt.p.normalize = exp_no_normalize ? 0 : 1;
      return cmd_experiment(dopt, copt, eopt);
    }
    if (*coll) return cmd_collate(inputs, split, metric, out);
    if (*rank) return cmd_rank(inputs, split, metric, alpha, json, svg);
    if (*bench) return cmd_bench(dopt, lengths, reps, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
