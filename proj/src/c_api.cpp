#include "tsclust/tsclust.h"

#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "tsclust/clustering.hpp"
#include "tsclust/distance.hpp"
#include "tsclust/error.hpp"
#include "tsclust/experiment.hpp"
#include "tsclust/io.hpp"
#include "tsclust/metrics.hpp"
#include "tsclust/stats.hpp"

using namespace tsclust;

struct tsc_distance {
  Distance dist;
  std::string canonical;
};

struct tsc_dataset {
  Dataset data;
};

struct tsc_model {
  ClusterModel model;
};

struct tsc_experiment {
  ExperimentResult result;
  std::string train_file;
  std::string test_file;
};

struct tsc_collation {
  Collation collation;
  std::map<std::string, std::string> csv;
};

struct tsc_cd_result {
  CdOutput out;
};

namespace {

thread_local std::string g_last_error;

tsc_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return TSC_ERR_INVALID_INPUT;
    case ErrorCode::shape_mismatch: return TSC_ERR_SHAPE_MISMATCH;
    case ErrorCode::too_short: return TSC_ERR_TOO_SHORT;
    case ErrorCode::unknown_measure: return TSC_ERR_UNKNOWN_MEASURE;
    case ErrorCode::empty_input: return TSC_ERR_EMPTY_INPUT;
    case ErrorCode::parse_error: return TSC_ERR_PARSE;
    case ErrorCode::unsupported_dataset: return TSC_ERR_UNSUPPORTED_DATASET;
    case ErrorCode::degenerate: return TSC_ERR_DEGENERATE;
    case ErrorCode::undefined_test: return TSC_ERR_UNDEFINED_TEST;
    case ErrorCode::overwrite_refused: return TSC_ERR_OVERWRITE_REFUSED;
    case ErrorCode::io_error: return TSC_ERR_IO;
    case ErrorCode::unsupported_operation: return TSC_ERR_UNSUPPORTED_OPERATION;
  }
  return TSC_ERR_INTERNAL;
}

tsc_status set_error(tsc_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

struct NullArgument {};

struct BufferTooSmall {
  std::string what;
};

template <class... Ptrs>
void require(Ptrs... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

void need_capacity(std::size_t have, std::size_t need) {
  if (have < need)
    throw BufferTooSmall{"buffer holds " + std::to_string(have) + " elements, " +
                         std::to_string(need) + " needed"};
}

/// Runs fn, translating every exception into a status code.
template <class Fn>
tsc_status run(Fn&& fn) {
  try {
    fn();
    return TSC_OK;
  } catch (const NullArgument&) {
    return set_error(TSC_ERR_NULL_ARGUMENT, "null argument");
  } catch (const BufferTooSmall& e) {
    return set_error(TSC_ERR_BUFFER_TOO_SMALL, e.what);
  } catch (const Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(TSC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(TSC_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(TSC_ERR_INTERNAL, "unknown failure");
  }
}

DistanceSpec spec_from(const tsc_distance_params& p) {
  DistanceSpec s;
  s.measure = parse_measure(p.metric ? p.metric : "dtw");
  s.window = p.window;
  s.wdtw_g = p.g;
  s.epsilon = p.epsilon;
  s.erp_gap = p.gap;
  s.msm_cost = p.cost;
  s.twe_nu = p.nu;
  s.twe_lambda = p.lambda;
  s.edr_normalize = p.edr_normalize != 0;
  return s;
}

ClusteringConfig config_from(const tsc_cluster_params& p, const tsc_distance& d) {
  ClusteringConfig c;
  c.k = p.k;
  c.algorithm = parse_algorithm(p.clusterer ? p.clusterer : "kmeans");
  c.averaging = parse_averaging(p.averaging ? p.averaging : "mean");
  c.init = parse_init(p.init ? p.init : "forgy");
  c.max_iters = p.max_iters;
  c.restarts = p.restarts;
  c.seed = p.seed;
  c.threads = p.threads == 0 ? 1 : p.threads;
  c.dba_refinements = p.dba_refinements;
  c.dba_tol = p.dba_tol;
  c.distance = d.dist.spec();
  return c;
}

}  // namespace

extern "C" {

const char* tsc_last_error(void) { return g_last_error.c_str(); }

const char* tsc_status_string(tsc_status s) {
  switch (s) {
    case TSC_OK: return "ok";
    case TSC_ERR_INVALID_INPUT: return "invalid input";
    case TSC_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case TSC_ERR_TOO_SHORT: return "series too short";
    case TSC_ERR_UNKNOWN_MEASURE: return "unknown measure";
    case TSC_ERR_EMPTY_INPUT: return "empty input";
    case TSC_ERR_PARSE: return "parse error";
    case TSC_ERR_UNSUPPORTED_DATASET: return "unsupported dataset";
    case TSC_ERR_DEGENERATE: return "degenerate clustering";
    case TSC_ERR_UNDEFINED_TEST: return "undefined test";
    case TSC_ERR_OVERWRITE_REFUSED: return "overwrite refused";
    case TSC_ERR_IO: return "i/o error";
    case TSC_ERR_UNSUPPORTED_OPERATION: return "unsupported operation";
    case TSC_ERR_NULL_ARGUMENT: return "null argument";
    case TSC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case TSC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tsc_version(void) { return "0.1.0"; }

void tsc_distance_params_init(tsc_distance_params* p) {
  if (!p) return;
  const DistanceSpec s;
  p->metric = "dtw";
  p->window = s.window;
  p->g = s.wdtw_g;
  p->epsilon = s.epsilon;
  p->gap = s.erp_gap;
  p->cost = s.msm_cost;
  p->nu = s.twe_nu;
  p->lambda = s.twe_lambda;
  p->edr_normalize = 0;
}

tsc_status tsc_distance_create(const tsc_distance_params* params, tsc_distance** out) {
  return run([&] {
    require(params, out);
    *out = nullptr;
    Distance d(spec_from(*params));
    std::string c = d.spec().canonical();
    *out = new tsc_distance{std::move(d), std::move(c)};
  });
}

void tsc_distance_destroy(tsc_distance* d) { delete d; }

const char* tsc_distance_canonical(const tsc_distance* d) { return d ? d->canonical.c_str() : nullptr; }

tsc_status tsc_distance_eval(const tsc_distance* d, const double* a, const double* b, size_t m,
                             double* out) {
  return run([&] {
    require(d, a, b, out);
    *out = d->dist(std::span<const double>(a, m), std::span<const double>(b, m));
  });
}

tsc_status tsc_distance_path(const tsc_distance* d, const double* a, const double* b, size_t m,
                             size_t* pairs, size_t capacity, size_t* length, double* distance) {
  return run([&] {
    require(d, a, b, length);
    const auto r = alignment_path(std::span<const double>(a, m), std::span<const double>(b, m),
                                  d->dist.spec());
    *length = r.path.size();
    if (distance) *distance = r.distance;
    need_capacity(pairs ? capacity : 0, r.path.size());
    for (std::size_t t = 0; t < r.path.size(); ++t) {
      pairs[2 * t] = r.path[t].i;
      pairs[2 * t + 1] = r.path[t].j;
    }
  });
}

tsc_status tsc_distance_cost_matrix(const tsc_distance* d, const double* a, const double* b,
                                    size_t m, double* out, size_t capacity, size_t* side) {
  return run([&] {
    require(d, a, b, side);
    const auto c = cost_matrix(std::span<const double>(a, m), std::span<const double>(b, m),
                               d->dist.spec());
    const std::size_t s = c.length() + 1;
    *side = s;
    need_capacity(out ? capacity : 0, s * s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) out[i * s + j] = c(i, j);
  });
}

tsc_status tsc_dataset_load(const char* path, tsc_dataset** out) {
  return run([&] {
    require(path, out);
    *out = nullptr;
    *out = new tsc_dataset{load_ucr_dataset(path)};
  });
}

tsc_status tsc_dataset_create(const double* values, size_t n, size_t m, const char* const* labels,
                              const char* name, tsc_dataset** out) {
  return run([&] {
    require(values, out);
    *out = nullptr;
    std::vector<TimeSeries> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      xs.emplace_back(std::vector<double>(values + i * m, values + (i + 1) * m));
    const std::string nm = name ? name : "";
    if (labels) {
      std::vector<std::string> ys;
      for (std::size_t i = 0; i < n; ++i) {
        require(labels[i]);
        ys.emplace_back(labels[i]);
      }
      *out = new tsc_dataset{Dataset(std::move(xs), std::move(ys), nm)};
    } else {
      *out = new tsc_dataset{Dataset(std::move(xs), nm)};
    }
  });
}

void tsc_dataset_destroy(tsc_dataset* d) { delete d; }

tsc_status tsc_dataset_save(const tsc_dataset* d, const char* path) {
  return run([&] {
    require(d, path);
    save_ucr_dataset(path, d->data);
  });
}

tsc_status tsc_dataset_normalize(const tsc_dataset* d, tsc_dataset** out) {
  return run([&] {
    require(d, out);
    *out = nullptr;
    *out = new tsc_dataset{z_normalize(d->data)};
  });
}

size_t tsc_dataset_size(const tsc_dataset* d) { return d ? d->data.size() : 0; }
size_t tsc_dataset_length(const tsc_dataset* d) { return d ? d->data.length() : 0; }
const char* tsc_dataset_name(const tsc_dataset* d) { return d ? d->data.name().c_str() : nullptr; }

tsc_status tsc_dataset_series(const tsc_dataset* d, size_t i, double* out, size_t capacity) {
  return run([&] {
    require(d, out);
    if (i >= d->data.size()) fail(ErrorCode::invalid_input, "series index out of range");
    const auto& x = d->data[i];
    need_capacity(capacity, x.size());
    std::copy(x.begin(), x.end(), out);
  });
}

int tsc_dataset_has_labels(const tsc_dataset* d) { return d && d->data.has_labels() ? 1 : 0; }

const char* tsc_dataset_label(const tsc_dataset* d, size_t i) {
  if (!d || !d->data.has_labels() || i >= d->data.size()) return nullptr;
  return d->data.labels()[i].c_str();
}

size_t tsc_dataset_class_count(const tsc_dataset* d) {
  return d && d->data.has_labels() ? d->data.classes().size() : 0;
}

tsc_status tsc_dataset_label_codes(const tsc_dataset* d, int* out, size_t capacity) {
  return run([&] {
    require(d, out);
    const auto codes = d->data.label_codes();
    need_capacity(capacity, codes.size());
    std::copy(codes.begin(), codes.end(), out);
  });
}

tsc_status tsc_load_series(const char* path, double* out, size_t capacity, size_t* length) {
  return run([&] {
    require(path, length);
    const auto v = load_series(path);
    *length = v.size();
    need_capacity(out ? capacity : 0, v.size());
    std::copy(v.begin(), v.end(), out);
  });
}

tsc_status tsc_pairwise(const tsc_distance* d, const tsc_dataset* x, const tsc_dataset* y,
                        size_t threads, double* out, size_t capacity) {
  return run([&] {
    require(d, x, out);
    const std::size_t t = threads == 0 ? 1 : threads;
    const auto mat = y ? pairwise_distance(x->data.series(), y->data.series(), d->dist.spec(), t)
                       : pairwise_distance(x->data.series(), d->dist.spec(), t);
    need_capacity(capacity, mat.cells().size());
    std::copy(mat.cells().begin(), mat.cells().end(), out);
  });
}

void tsc_cluster_params_init(tsc_cluster_params* p) {
  if (!p) return;
  const ClusteringConfig c;
  p->k = c.k;
  p->clusterer = "kmeans";
  p->averaging = "mean";
  p->init = "forgy";
  p->max_iters = c.max_iters;
  p->restarts = c.restarts;
  p->seed = c.seed;
  p->threads = 1;
  p->dba_refinements = c.dba_refinements;
  p->dba_tol = c.dba_tol;
}

tsc_status tsc_fit(const tsc_dataset* data, const tsc_distance* d, const tsc_cluster_params* params,
                   tsc_model** out) {
  return run([&] {
    require(data, d, params, out);
    *out = nullptr;
    *out = new tsc_model{fit(data->data.series(), config_from(*params, *d))};
  });
}

tsc_status tsc_tune_window(const tsc_dataset* data, const tsc_distance* d,
                           const tsc_cluster_params* params, int prefer_highest, double* window,
                           tsc_model** out) {
  return run([&] {
    require(data, d, params, out);
    *out = nullptr;
    auto r = tune_dtw_window(data->data.series(), config_from(*params, *d), prefer_highest != 0);
    if (window) *window = r.window;
    *out = new tsc_model{std::move(r.model)};
  });
}

void tsc_model_destroy(tsc_model* m) { delete m; }
size_t tsc_model_k(const tsc_model* m) { return m ? m->model.exemplars.size() : 0; }
size_t tsc_model_size(const tsc_model* m) { return m ? m->model.assignments.size() : 0; }
double tsc_model_inertia(const tsc_model* m) { return m ? m->model.inertia : 0.0; }
size_t tsc_model_iterations(const tsc_model* m) { return m ? m->model.iterations_run : 0; }
int tsc_model_converged(const tsc_model* m) { return m && m->model.converged ? 1 : 0; }

tsc_status tsc_model_assignments(const tsc_model* m, int* out, size_t capacity) {
  return run([&] {
    require(m, out);
    const auto& a = m->model.assignments;
    need_capacity(capacity, a.size());
    std::copy(a.begin(), a.end(), out);
  });
}

tsc_status tsc_model_exemplar(const tsc_model* m, size_t c, double* out, size_t capacity) {
  return run([&] {
    require(m, out);
    if (c >= m->model.exemplars.size()) fail(ErrorCode::invalid_input, "cluster index out of range");
    const auto& x = m->model.exemplars[c];
    need_capacity(capacity, x.size());
    std::copy(x.begin(), x.end(), out);
  });
}

tsc_status tsc_model_inertia_history(const tsc_model* m, double* out, size_t capacity,
                                     size_t* length) {
  return run([&] {
    require(m, length);
    const auto& h = m->model.inertia_history;
    *length = h.size();
    need_capacity(out ? capacity : 0, h.size());
    std::copy(h.begin(), h.end(), out);
  });
}

tsc_status tsc_model_predict(const tsc_model* m, const tsc_dataset* data, int* out,
                             size_t capacity) {
  return run([&] {
    require(m, data, out);
    need_capacity(capacity, data->data.size());
    const auto p = predict(m->model, data->data.series());
    std::copy(p.begin(), p.end(), out);
  });
}

tsc_status tsc_evaluate(const int* y_true, const int* y_pred, size_t n, tsc_scores* out) {
  return run([&] {
    require(y_true, y_pred, out);
    const auto s = evaluate(std::span<const int>(y_true, n), std::span<const int>(y_pred, n));
    *out = {s.clacc, s.ri, s.ari, s.mi, s.nmi, s.ami};
  });
}

tsc_status tsc_davies_bouldin(const tsc_dataset* data, const int* assignments, size_t n,
                              double* out) {
  return run([&] {
    require(data, assignments, out);
    *out = davies_bouldin(data->data.series(), std::span<const int>(assignments, n));
  });
}

tsc_status tsc_wilcoxon(const double* x, const double* y, size_t n, double* p_value) {
  return run([&] {
    require(x, y, p_value);
    *p_value = wilcoxon_signed_rank(std::span<const double>(x, n), std::span<const double>(y, n)).p_value;
  });
}

void tsc_experiment_params_init(tsc_experiment_params* p) {
  if (!p) return;
  p->train_path = nullptr;
  p->test_path = nullptr;
  p->out_dir = "results";
  p->normalize = 1;
  p->resample = 0;
  p->base_seed = 1;
  p->overwrite = 0;
  p->tune_window = 0;
  p->tune_prefer_highest = 0;
  p->record_timing = 0;
}

tsc_status tsc_experiment_run(const tsc_experiment_params* params, const tsc_distance* d,
                              const tsc_cluster_params* cluster, tsc_experiment** out) {
  return run([&] {
    require(params, d, cluster, out, params->train_path);
    *out = nullptr;
    ExperimentConfig cfg;
    cfg.train_path = params->train_path;
    if (params->test_path) cfg.test_path = params->test_path;
    cfg.out_dir = params->out_dir ? params->out_dir : "results";
    cfg.clustering = config_from(*cluster, *d);
    cfg.normalize = params->normalize != 0;
    cfg.resample = params->resample;
    cfg.base_seed = params->base_seed;
    cfg.overwrite = params->overwrite != 0;
    cfg.tune_window = params->tune_window != 0;
    cfg.tune_prefer_highest = params->tune_prefer_highest != 0;
    cfg.record_timing = params->record_timing != 0;
    auto e = std::make_unique<tsc_experiment>();
    e->result = run_experiment(cfg);
    e->train_file = e->result.train_file.string();
    if (e->result.test_file) e->test_file = e->result.test_file->string();
    *out = e.release();
  });
}

void tsc_experiment_destroy(tsc_experiment* e) { delete e; }
size_t tsc_metric_count(void) { return kMetricCount; }
const char* tsc_metric_name(size_t i) { return i < kMetricCount ? kMetricNames[i] : nullptr; }

tsc_status tsc_experiment_metrics(const tsc_experiment* e, int split, double* out) {
  return run([&] {
    require(e, out);
    const EvalReport* r = split == 0 ? &e->result.train : (e->result.test ? &*e->result.test : nullptr);
    if (!r) fail(ErrorCode::invalid_input, "experiment has no test split");
    std::copy(r->metrics.begin(), r->metrics.end(), out);
  });
}

const char* tsc_experiment_file(const tsc_experiment* e, int split) {
  if (!e) return nullptr;
  if (split == 0) return e->train_file.c_str();
  return e->result.test_file ? e->test_file.c_str() : nullptr;
}

const char* tsc_experiment_clusterer(const tsc_experiment* e) {
  return e ? e->result.train.clusterer.c_str() : nullptr;
}

double tsc_experiment_window(const tsc_experiment* e) { return e ? e->result.window_chosen : 0.0; }

tsc_status tsc_collate(const char* const* dirs, size_t ndirs, const char* split,
                       tsc_collation** out) {
  return run([&] {
    require(dirs, out);
    *out = nullptr;
    std::vector<std::filesystem::path> paths;
    for (std::size_t i = 0; i < ndirs; ++i) {
      require(dirs[i]);
      paths.emplace_back(dirs[i]);
    }
    auto c = std::make_unique<tsc_collation>();
    c->collation = collate_results(paths, split ? split : "test");
    for (const auto& [metric, table] : c->collation.tables) c->csv[metric] = format_table(table);
    *out = c.release();
  });
}

void tsc_collation_destroy(tsc_collation* c) { delete c; }
size_t tsc_collation_files_read(const tsc_collation* c) { return c ? c->collation.files_read : 0; }
size_t tsc_collation_warning_count(const tsc_collation* c) {
  return c ? c->collation.warnings.size() : 0;
}
const char* tsc_collation_warning(const tsc_collation* c, size_t i) {
  if (!c || i >= c->collation.warnings.size()) return nullptr;
  return c->collation.warnings[i].c_str();
}
const char* tsc_collation_table(const tsc_collation* c, const char* metric) {
  if (!c || !metric) return nullptr;
  const auto it = c->csv.find(metric);
  return it == c->csv.end() ? nullptr : it->second.c_str();
}

namespace {

tsc_status rank_into(const ResultsTable& table, const char* metric, double alpha,
                     tsc_cd_result** out) {
  return run([&] {
    require(out);
    *out = nullptr;
    const std::string m = metric ? metric : "";
    const auto an = holm_cliques(oriented_for_ranking(table, m), alpha);
    *out = new tsc_cd_result{emit_cd_output(an, m)};
  });
}

}  // namespace

tsc_status tsc_rank(const tsc_collation* c, const char* metric, double alpha, tsc_cd_result** out) {
  if (!c || !metric || !out) return set_error(TSC_ERR_NULL_ARGUMENT, "null argument");
  const auto it = c->collation.tables.find(metric);
  if (it == c->collation.tables.end())
    return set_error(TSC_ERR_INVALID_INPUT, std::string("unknown metric '") + metric + "'");
  return rank_into(it->second, metric, alpha, out);
}

tsc_status tsc_rank_table(const char* csv, const char* metric, double alpha, tsc_cd_result** out) {
  if (!csv || !out) return set_error(TSC_ERR_NULL_ARGUMENT, "null argument");
  ResultsTable t;
  const tsc_status s = run([&] { t = parse_table(csv); });
  if (s != TSC_OK) return s;
  return rank_into(t, metric, alpha, out);
}

void tsc_cd_destroy(tsc_cd_result* r) { delete r; }
const char* tsc_cd_text(const tsc_cd_result* r) { return r ? r->out.text.c_str() : nullptr; }
const char* tsc_cd_json(const tsc_cd_result* r) { return r ? r->out.json.c_str() : nullptr; }
const char* tsc_cd_svg(const tsc_cd_result* r) { return r ? r->out.svg.c_str() : nullptr; }

}  // extern "C"
