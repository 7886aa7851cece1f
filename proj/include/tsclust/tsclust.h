#ifndef TSCLUST_H
#define TSCLUST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TSCLUST_BUILDING)
#define TSC_API __declspec(dllexport)
#else
#define TSC_API __declspec(dllimport)
#endif
#else
#define TSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Every fallible call returns a tsc_status. On failure the message is kept
 * per thread and stays valid until the next failing call on that thread.
 * Handles are opaque; each *_create / *_load / *_run has a matching
 * *_destroy that accepts NULL. Strings returned by accessors are owned by
 * the handle. Array outputs take a capacity in elements and fail with
 * TSC_ERR_BUFFER_TOO_SMALL when it is not enough.
 */
typedef enum tsc_status {
  TSC_OK = 0,
  TSC_ERR_INVALID_INPUT = 1,
  TSC_ERR_SHAPE_MISMATCH = 2,
  TSC_ERR_TOO_SHORT = 3,
  TSC_ERR_UNKNOWN_MEASURE = 4,
  TSC_ERR_EMPTY_INPUT = 5,
  TSC_ERR_PARSE = 6,
  TSC_ERR_UNSUPPORTED_DATASET = 7,
  TSC_ERR_DEGENERATE = 8,
  TSC_ERR_UNDEFINED_TEST = 9,
  TSC_ERR_OVERWRITE_REFUSED = 10,
  TSC_ERR_IO = 11,
  TSC_ERR_UNSUPPORTED_OPERATION = 12,
  TSC_ERR_NULL_ARGUMENT = 13,
  TSC_ERR_BUFFER_TOO_SMALL = 14,
  TSC_ERR_INTERNAL = 15
} tsc_status;

TSC_API const char* tsc_last_error(void);
TSC_API const char* tsc_status_string(tsc_status status);
TSC_API const char* tsc_version(void);

/* ---- distances ---- */

typedef struct tsc_distance_params {
  const char* metric; /* ed dtw ddtw wdtw wddtw lcss edr erp msm twe */
  double window;      /* dtw, ddtw */
  double g;           /* wdtw, wddtw */
  double epsilon;     /* lcss, edr */
  double gap;         /* erp */
  double cost;        /* msm */
  double nu;          /* twe */
  double lambda;      /* twe */
  int edr_normalize;
} tsc_distance_params;

/* dtw, window 0.2, g 0.05, epsilon 0.05, gap 0.05, cost 1, nu 0.05, lambda 1. */
TSC_API void tsc_distance_params_init(tsc_distance_params* params);

typedef struct tsc_distance tsc_distance;

TSC_API tsc_status tsc_distance_create(const tsc_distance_params* params, tsc_distance** out);
TSC_API void tsc_distance_destroy(tsc_distance* d);
TSC_API const char* tsc_distance_canonical(const tsc_distance* d);
TSC_API tsc_status tsc_distance_eval(const tsc_distance* d, const double* a, const double* b,
                                     size_t m, double* out);
/* Warping path as 1-based (i, j) pairs packed into `pairs` (2 * capacity
 * entries). ed and the DTW family only. */
TSC_API tsc_status tsc_distance_path(const tsc_distance* d, const double* a, const double* b,
                                     size_t m, size_t* pairs, size_t capacity, size_t* length,
                                     double* distance);
/* Row-major (side x side) accumulation grid, side = m' + 1 where m' is the
 * length seen by the kernel (m - 2 for derivative measures). */
TSC_API tsc_status tsc_distance_cost_matrix(const tsc_distance* d, const double* a,
                                            const double* b, size_t m, double* out,
                                            size_t capacity, size_t* side);

/* ---- datasets ---- */

typedef struct tsc_dataset tsc_dataset;

TSC_API tsc_status tsc_dataset_load(const char* path, tsc_dataset** out);
/* `values` is n x m row-major; `labels` may be NULL. */
TSC_API tsc_status tsc_dataset_create(const double* values, size_t n, size_t m,
                                      const char* const* labels, const char* name,
                                      tsc_dataset** out);
TSC_API void tsc_dataset_destroy(tsc_dataset* d);
TSC_API tsc_status tsc_dataset_save(const tsc_dataset* d, const char* path);
TSC_API tsc_status tsc_dataset_normalize(const tsc_dataset* d, tsc_dataset** out);
TSC_API size_t tsc_dataset_size(const tsc_dataset* d);
TSC_API size_t tsc_dataset_length(const tsc_dataset* d);
TSC_API const char* tsc_dataset_name(const tsc_dataset* d);
TSC_API tsc_status tsc_dataset_series(const tsc_dataset* d, size_t i, double* out,
                                      size_t capacity);
TSC_API int tsc_dataset_has_labels(const tsc_dataset* d);
/* NULL when unlabelled or out of range. */
TSC_API const char* tsc_dataset_label(const tsc_dataset* d, size_t i);
TSC_API size_t tsc_dataset_class_count(const tsc_dataset* d);
TSC_API tsc_status tsc_dataset_label_codes(const tsc_dataset* d, int* out, size_t capacity);

/* First data line of a numeric file. */
TSC_API tsc_status tsc_load_series(const char* path, double* out, size_t capacity,
                                   size_t* length);

/* Pairwise matrix of x against y (x against itself when y is NULL),
 * |x| x |y| row-major. */
TSC_API tsc_status tsc_pairwise(const tsc_distance* d, const tsc_dataset* x,
                                const tsc_dataset* y, size_t threads, double* out,
                                size_t capacity);

/* ---- clustering ---- */

typedef struct tsc_cluster_params {
  size_t k;
  const char* clusterer; /* kmeans | kmedoids */
  const char* averaging; /* mean | dba */
  const char* init;      /* forgy | random_partition */
  size_t max_iters;
  size_t restarts;
  uint64_t seed;
  size_t threads;
  size_t dba_refinements;
  double dba_tol;
} tsc_cluster_params;

/* k 2, kmeans, mean, forgy, 300 iterations, 10 restarts, seed 1. */
TSC_API void tsc_cluster_params_init(tsc_cluster_params* params);

typedef struct tsc_model tsc_model;

/* Labels in `data`, if any, are not read. */
TSC_API tsc_status tsc_fit(const tsc_dataset* data, const tsc_distance* d,
                           const tsc_cluster_params* params, tsc_model** out);
/* Fits at windows 0.0..0.9 and keeps the lowest (or highest) Davies-Bouldin. */
TSC_API tsc_status tsc_tune_window(const tsc_dataset* data, const tsc_distance* d,
                                   const tsc_cluster_params* params, int prefer_highest,
                                   double* window, tsc_model** out);
TSC_API void tsc_model_destroy(tsc_model* model);
TSC_API size_t tsc_model_k(const tsc_model* model);
TSC_API size_t tsc_model_size(const tsc_model* model);
TSC_API double tsc_model_inertia(const tsc_model* model);
TSC_API size_t tsc_model_iterations(const tsc_model* model);
TSC_API int tsc_model_converged(const tsc_model* model);
TSC_API tsc_status tsc_model_assignments(const tsc_model* model, int* out, size_t capacity);
TSC_API tsc_status tsc_model_exemplar(const tsc_model* model, size_t c, double* out,
                                      size_t capacity);
TSC_API tsc_status tsc_model_inertia_history(const tsc_model* model, double* out,
                                             size_t capacity, size_t* length);
TSC_API tsc_status tsc_model_predict(const tsc_model* model, const tsc_dataset* data, int* out,
                                     size_t capacity);

/* ---- evaluation ---- */

typedef struct tsc_scores {
  double clacc, ri, ari, mi, nmi, ami;
} tsc_scores;

TSC_API tsc_status tsc_evaluate(const int* y_true, const int* y_pred, size_t n, tsc_scores* out);
TSC_API tsc_status tsc_davies_bouldin(const tsc_dataset* data, const int* assignments, size_t n,
                                      double* out);
TSC_API tsc_status tsc_wilcoxon(const double* x, const double* y, size_t n, double* p_value);

/* ---- experiments ---- */

typedef struct tsc_experiment_params {
  const char* train_path;
  const char* test_path; /* may be NULL */
  const char* out_dir;
  int normalize;
  size_t resample;
  uint64_t base_seed;
  int overwrite;
  int tune_window;
  int tune_prefer_highest;
  int record_timing;
} tsc_experiment_params;

/* normalize on, resample 0, base seed 1, out_dir "results". */
TSC_API void tsc_experiment_params_init(tsc_experiment_params* params);

typedef struct tsc_experiment tsc_experiment;

/* params->k of 0 selects the number of training classes; params->seed is
 * replaced by base_seed + resample. */
TSC_API tsc_status tsc_experiment_run(const tsc_experiment_params* params, const tsc_distance* d,
                                      const tsc_cluster_params* cluster, tsc_experiment** out);
TSC_API void tsc_experiment_destroy(tsc_experiment* e);
TSC_API size_t tsc_metric_count(void);
TSC_API const char* tsc_metric_name(size_t i);
/* split 0 = train, 1 = test; `out` receives tsc_metric_count() values. */
TSC_API tsc_status tsc_experiment_metrics(const tsc_experiment* e, int split, double* out);
TSC_API const char* tsc_experiment_file(const tsc_experiment* e, int split);
TSC_API const char* tsc_experiment_clusterer(const tsc_experiment* e);
TSC_API double tsc_experiment_window(const tsc_experiment* e);

/* ---- collation and ranking ---- */

typedef struct tsc_collation tsc_collation;

TSC_API tsc_status tsc_collate(const char* const* dirs, size_t ndirs, const char* split,
                               tsc_collation** out);
TSC_API void tsc_collation_destroy(tsc_collation* c);
TSC_API size_t tsc_collation_files_read(const tsc_collation* c);
TSC_API size_t tsc_collation_warning_count(const tsc_collation* c);
TSC_API const char* tsc_collation_warning(const tsc_collation* c, size_t i);
/* CSV table for one metric, NULL for an unknown metric. */
TSC_API const char* tsc_collation_table(const tsc_collation* c, const char* metric);

typedef struct tsc_cd_result tsc_cd_result;

TSC_API tsc_status tsc_rank(const tsc_collation* c, const char* metric, double alpha,
                            tsc_cd_result** out);
/* Ranks a table in the CSV form produced by tsc_collation_table. */
TSC_API tsc_status tsc_rank_table(const char* csv, const char* metric, double alpha,
                                  tsc_cd_result** out);
TSC_API void tsc_cd_destroy(tsc_cd_result* r);
TSC_API const char* tsc_cd_text(const tsc_cd_result* r);
TSC_API const char* tsc_cd_json(const tsc_cd_result* r);
TSC_API const char* tsc_cd_svg(const tsc_cd_result* r);

#ifdef __cplusplus
}
#endif

#endif
