#include "tsclust/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "tsclust/error.hpp"
#include "tsclust/io.hpp"
#include "tsclust/metrics.hpp"

namespace tsclust {

namespace fs = std::filesystem;

std::string clusterer_name(const ClusteringConfig& config, bool tuned) {
  std::string s(to_string(config.algorithm));
  if (config.algorithm == Algorithm::kmeans && config.averaging == Averaging::dba) s += "-dba";
  s += "-";
  s += to_string(config.distance.measure);
  if (tuned) s += "-tuned";
  return s;
}

std::uint64_t resample_seed(std::uint64_t base_seed, std::size_t resample) {
  return base_seed + resample;
}

double EvalReport::metric(std::string_view name) const {
  for (std::size_t i = 0; i < kMetricCount; ++i)
    if (name == kMetricNames[i]) return metrics[i];
  fail(ErrorCode::invalid_input, "unknown metric '" + std::string(name) + "'");
}

std::string format_results(const EvalReport& r) {
  std::ostringstream out;
  out << r.dataset << "," << r.clusterer << "," << r.split << "," << r.resample << "," << r.seed
      << "\n";
  out << r.parameters << "\n";
  for (std::size_t i = 0; i < kMetricCount; ++i) out << (i ? "," : "") << format_real(r.metrics[i]);
  out << "\n";
  for (std::size_t i = 0; i < r.assigned.size(); ++i)
    out << r.true_labels[i] << "," << r.assigned[i] << "\n";
  return out.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

EvalReport parse_results(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  EvalReport r;
  auto next = [&](std::size_t no) {
    if (!std::getline(in, line)) fail(ErrorCode::parse_error, "results file ends before line " + std::to_string(no));
  };
  next(1);
  auto head = split_csv(line);
  if (head.size() != 5) fail(ErrorCode::parse_error, "line 1: expected 5 fields");
  r.dataset = head[0];
  r.clusterer = head[1];
  r.split = head[2];
  try {
    r.resample = std::stoul(head[3]);
    r.seed = std::stoull(head[4]);
  } catch (const std::exception&) {
    fail(ErrorCode::parse_error, "line 1: bad resample or seed");
  }
  next(2);
  r.parameters = line;
  next(3);
  const auto vals = split_csv(line);
  if (vals.size() != kMetricCount)
    fail(ErrorCode::parse_error, "line 3: expected " + std::to_string(kMetricCount) + " metrics");
  for (std::size_t i = 0; i < kMetricCount; ++i) r.metrics[i] = parse_real(vals[i], 3);
  std::size_t no = 3;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) fail(ErrorCode::parse_error, "line " + std::to_string(no) + ": expected label,cluster");
    r.true_labels.push_back(line.substr(0, comma));
    try {
      r.assigned.push_back(std::stoi(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::parse_error, "line " + std::to_string(no) + ": bad cluster id");
    }
  }
  return r;
}

EvalReport load_results(const fs::path& path) {
  try {
    return parse_results(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io_error) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

std::array<double, 6> recompute_supervised(const EvalReport& report) {
  // The metrics ignore the label alphabet, so any injective coding works.
  std::map<std::string, int> code;
  std::vector<int> y;
  for (const auto& l : report.true_labels)
    y.push_back(code.emplace(l, static_cast<int>(code.size())).first->second);
  const auto s = evaluate(y, report.assigned);
  return {s.clacc, s.ri, s.ari, s.mi, s.nmi, s.ami};
}

void check_training_split(const Dataset& train) {
  if (!train.has_labels()) fail(ErrorCode::invalid_input, "training data needs class labels");
  std::map<std::string, std::size_t> count;
  for (const auto& l : train.labels()) ++count[l];
  for (const auto& [label, c] : count)
    if (c < 2)
      fail(ErrorCode::unsupported_dataset,
           "class '" + label + "' has a single training case");
}

fs::path results_path(const fs::path& out_dir, const std::string& clusterer,
                      const std::string& dataset, const std::string& split, std::size_t resample) {
  return out_dir / clusterer / dataset / (split + "Resample" + std::to_string(resample) + ".csv");
}

namespace {

double db_or_nan(std::span<const TimeSeries> x, const std::vector<int>& assigned) {
  // Relabel the clusters that actually occur to 0..k'-1.
  std::vector<int> ids(assigned.begin(), assigned.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2) return std::nan("");
  std::vector<int> compact(assigned.size());
  for (std::size_t i = 0; i < assigned.size(); ++i)
    compact[i] = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), assigned[i]) - ids.begin());
  try {
    return davies_bouldin(x, compact);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate) throw;
    return std::nan("");
  }
}

EvalReport make_report(const Dataset& d, const std::vector<int>& assigned, const std::string& split) {
  EvalReport r;
  r.split = split;
  r.true_labels = d.labels();
  r.assigned = assigned;
  const auto s = evaluate(d.label_codes(), assigned);
  r.metrics = {s.clacc, s.ri, s.ari, s.mi, s.nmi, s.ami, db_or_nan(d.series(), assigned), 0.0, 0.0};
  return r;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  Dataset train = load_ucr_dataset(config.train_path);
  check_training_split(train);
  std::optional<Dataset> test;
  if (config.test_path) {
    test = load_ucr_dataset(*config.test_path);
    if (!test->has_labels()) fail(ErrorCode::invalid_input, "test data needs class labels");
    if (test->length() != train.length())
      fail(ErrorCode::shape_mismatch, "train and test series lengths differ");
  }
  if (config.normalize) {
    train = z_normalize(train);
    if (test) test = z_normalize(*test);
  }

  ClusteringConfig cc = config.clustering;
  if (cc.k == 0) cc.k = train.classes().size();
  cc.seed = resample_seed(config.base_seed, config.resample);

  const std::string name = clusterer_name(cc, config.tune_window);
  ExperimentResult result;
  result.train_file = results_path(config.out_dir, name, train.name(), "train", config.resample);
  if (test) result.test_file = results_path(config.out_dir, name, train.name(), "test", config.resample);
  if (!config.overwrite) {
    for (const auto& p : {std::optional(result.train_file), result.test_file})
      if (p && fs::exists(*p))
        fail(ErrorCode::overwrite_refused, "'" + p->string() + "' exists; pass overwrite to replace it");
  }

  const auto fit_start = std::chrono::steady_clock::now();
  if (config.tune_window) {
    auto tuned = tune_dtw_window(train.series(), cc, config.tune_prefer_highest);
    result.window_chosen = tuned.window;
    result.model = std::move(tuned.model);
  } else {
    result.model = fit(train.series(), cc);
    result.window_chosen = cc.distance.window;
  }
  const double fit_ms = elapsed_ms(fit_start);

  std::string params = result.model.config.distance.canonical() + ";" + result.model.config.canonical() +
                       ";normalize=" + (config.normalize ? "1" : "0");
  if (config.tune_window) params += std::string(";tuned=") + (config.tune_prefer_highest ? "highest" : "lowest");

  auto finish = [&](EvalReport& r) {
    r.dataset = train.name();
    r.clusterer = name;
    r.resample = config.resample;
    r.seed = cc.seed;
    r.parameters = params;
  };

  result.train = make_report(train, result.model.assignments, "train");
  finish(result.train);
  if (config.record_timing) result.train.metrics[7] = fit_ms;

  if (test) {
    const auto predict_start = std::chrono::steady_clock::now();
    const auto assigned = predict(result.model, test->series());
    const double predict_ms = elapsed_ms(predict_start);
    result.test = make_report(*test, assigned, "test");
    finish(*result.test);
    if (config.record_timing) {
      result.test->metrics[7] = fit_ms;
      result.test->metrics[8] = predict_ms;
    }
  }

  write_text_file(result.train_file, format_results(result.train));
  if (result.test) write_text_file(*result.test_file, format_results(*result.test));
  return result;
}

Collation collate_results(const std::vector<fs::path>& dirs, const std::string& split) {
  Collation out;
  out.split = split;
  // sums[dataset][clusterer] -> metric sums and count
  std::map<std::string, std::map<std::string, std::pair<std::array<double, kMetricCount>, std::size_t>>> sums;
  std::set<std::string> clusterers;
  const std::string prefix = split + "Resample";

  std::vector<fs::path> files;
  for (const auto& dir : dirs) {
    if (!fs::exists(dir)) {
      out.warnings.push_back("'" + dir.string() + "' does not exist");
      continue;
    }
    if (fs::is_regular_file(dir)) {
      files.push_back(dir);
      continue;
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto fname = entry.path().filename().string();
      if (fname.rfind(prefix, 0) == 0 && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& f : files) {
    EvalReport r;
    try {
      r = load_results(f);
    } catch (const Error& e) {
      out.warnings.push_back(std::string("skipped ") + e.what());
      continue;
    }
    if (r.split != split) continue;
    auto& cell = sums[r.dataset][r.clusterer];
    for (std::size_t i = 0; i < kMetricCount; ++i) cell.first[i] += r.metrics[i];
    ++cell.second;
    clusterers.insert(r.clusterer);
    ++out.files_read;
  }
  if (out.files_read == 0) fail(ErrorCode::empty_input, "no parsable " + split + " results files found");

  const std::vector<std::string> algs(clusterers.begin(), clusterers.end());
  std::set<std::string> incomplete;
  for (const auto& [dataset, by_alg] : sums) {
    if (by_alg.size() != algs.size()) {
      std::string missing;
      for (const auto& a : algs)
        if (!by_alg.count(a)) missing += (missing.empty() ? "" : ", ") + a;
      out.warnings.push_back("dropped dataset '" + dataset + "': no results for " + missing);
      incomplete.insert(dataset);
    }
  }

  for (std::size_t m = 0; m < kMetricCount; ++m) {
    ResultsTable t;
    t.algorithms = algs;
    for (const auto& [dataset, by_alg] : sums) {
      if (incomplete.count(dataset)) continue;
      std::vector<double> row;
      bool finite = true;
      for (const auto& a : algs) {
        const auto& [s, n] = by_alg.at(a);
        row.push_back(s[m] / static_cast<double>(n));
        finite = finite && std::isfinite(row.back());
      }
      if (!finite) {
        out.warnings.push_back("dropped dataset '" + dataset + "' from " + kMetricNames[m] +
                               ": undefined score");
        continue;
      }
      t.datasets.push_back(dataset);
      t.scores.push_back(std::move(row));
    }
    out.tables[kMetricNames[m]] = std::move(t);
  }
  return out;
}

std::string format_table(const ResultsTable& table) {
  std::ostringstream out;
  out << "dataset";
  for (const auto& a : table.algorithms) out << "," << a;
  out << "\n";
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    out << table.datasets[d];
    for (double v : table.scores[d]) out << "," << format_real(v);
    out << "\n";
  }
  return out.str();
}

ResultsTable parse_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse_error, "empty table");
  auto head = split_csv(line);
  if (head.size() < 2 || head[0] != "dataset") fail(ErrorCode::parse_error, "line 1: expected 'dataset,<algorithm>,...'");
  ResultsTable t;
  t.algorithms.assign(head.begin() + 1, head.end());
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != head.size())
      fail(ErrorCode::parse_error, "line " + std::to_string(no) + ": expected " + std::to_string(head.size()) + " fields");
    t.datasets.push_back(f[0]);
    t.scores.emplace_back();
    for (std::size_t i = 1; i < f.size(); ++i) t.scores.back().push_back(parse_real(f[i], no));
  }
  return t;
}

bool lower_is_better(std::string_view metric) {
  return metric == "db" || metric == "fit_ms" || metric == "predict_ms";
}

ResultsTable oriented_for_ranking(ResultsTable table, std::string_view metric) {
  if (lower_is_better(metric))
    for (auto& row : table.scores)
      for (auto& v : row) v = -v;
  return table;
}

}  // namespace tsclust
