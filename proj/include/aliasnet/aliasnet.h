/*
 * C interface to the aliasnet reconstruction engine.
 *
 * Objects are opaque handles created by an_* constructors and released with
 * the matching an_*_free. Every fallible call returns an an_status; on failure
 * an_last_error() describes the problem for the calling thread.
 */
#ifndef ALIASNET_ALIASNET_H
#define ALIASNET_ALIASNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef ALIASNET_BUILDING
#    define AN_API __declspec(dllexport)
#  else
#    define AN_API __declspec(dllimport)
#  endif
#else
#  define AN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum an_status {
  AN_OK = 0,
  AN_ERR_ARGUMENT = 1,
  AN_ERR_DIMENSION = 2,
  AN_ERR_FORMAT = 3,
  AN_ERR_IO = 4,
  AN_ERR_TRAINING = 5,
  AN_ERR_SOLVER = 6,
  AN_ERR_NONDETERMINISM = 7,
  AN_ERR_INTERNAL = 8
} an_status;

typedef enum an_method {
  AN_METHOD_ZERO_FILLED = 0,
  AN_METHOD_DIFF_CS = 1,
  AN_METHOD_SDAE = 2
} an_method;

typedef struct an_mask an_mask;
typedef struct an_sequence an_sequence; /* ordered real n x n frames */
typedef struct an_kspace an_kspace;     /* ordered complex n x n frames */
typedef struct an_trainset an_trainset;
typedef struct an_model an_model;
typedef struct an_train_log an_train_log;
typedef struct an_recon an_recon;
typedef struct an_metric_table an_metric_table;

/* Message for the last failed call on this thread; empty after success. */
AN_API const char* an_last_error(void);
AN_API const char* an_status_name(an_status status);
AN_API const char* an_version(void);

/* ---- sampling masks ---------------------------------------------------- */

AN_API an_status an_mask_variable_density(uint32_t n, double fraction, double decay, uint64_t seed, an_mask** out);
AN_API an_status an_mask_radial(uint32_t n, uint32_t lines, uint64_t seed, an_mask** out);
AN_API an_status an_mask_uniform(uint32_t n, uint32_t factor, an_mask** out);
/* "full", "radial:<lines>", "uniform:<factor>" or "vd:<fraction>:<decay>". */
AN_API an_status an_mask_from_spec(const char* spec, uint32_t n, uint64_t seed, an_mask** out);
AN_API an_status an_mask_load(const char* path, an_mask** out);
AN_API an_status an_mask_save(const an_mask* mask, const char* path);
AN_API uint32_t an_mask_size(const an_mask* mask);
AN_API size_t an_mask_count(const an_mask* mask);
AN_API double an_mask_fraction(const an_mask* mask);
/* Copies n*n bytes (0 or 1, row-major, DC at index 0). */
AN_API an_status an_mask_bits(const an_mask* mask, uint8_t* out, size_t len);
AN_API void an_mask_free(an_mask* mask);

/* ---- real frame sequences ---------------------------------------------- */

AN_API an_status an_sequence_create(uint32_t n, size_t frames, const double* data, size_t len, an_sequence** out);
AN_API an_status an_sequence_shepp_logan(uint32_t n, an_sequence** out);
AN_API an_status an_sequence_dynamic_phantom(uint32_t n, size_t frames, size_t period, double motion_amp,
                                             uint64_t seed, an_sequence** out);
AN_API an_status an_sequence_concat(const an_sequence* const* parts, size_t count, an_sequence** out);
AN_API an_status an_sequence_load(const char* path, an_sequence** out);
AN_API an_status an_sequence_save(const an_sequence* seq, const char* path);
AN_API uint32_t an_sequence_size(const an_sequence* seq);
AN_API size_t an_sequence_frames(const an_sequence* seq);
AN_API an_status an_sequence_frame(const an_sequence* seq, size_t index, double* out, size_t len);
AN_API void an_sequence_free(an_sequence* seq);

/* ---- acquisition ------------------------------------------------------- */

/* Frame t uses noise seed derived from (seed, t). */
AN_API an_status an_acquire(const an_sequence* seq, const an_mask* mask, double noise_sigma, uint64_t seed,
                            an_kspace** out);
AN_API an_status an_kspace_load(const char* path, an_kspace** out);
AN_API an_status an_kspace_save(const an_kspace* kspace, const char* path);
AN_API size_t an_kspace_frames(const an_kspace* kspace);
AN_API uint32_t an_kspace_size(const an_kspace* kspace);
AN_API an_status an_zero_filled(const an_kspace* kspace, const an_mask* mask, an_sequence** out);
AN_API void an_kspace_free(an_kspace* kspace);

/* ---- training sets ----------------------------------------------------- */

AN_API an_status an_trainset_build(const an_sequence* const* sequences, size_t count, const an_mask* mask,
                                   double noise_sigma, uint64_t seed, an_trainset** out);
AN_API an_status an_trainset_load(const char* path, an_trainset** out);
AN_API an_status an_trainset_save(const an_trainset* set, const char* path);
AN_API size_t an_trainset_dim(const an_trainset* set);
AN_API size_t an_trainset_columns(const an_trainset* set);
/* Copies column `index` of the inputs (aliased) and targets (clean); either may be NULL. */
AN_API an_status an_trainset_column(const an_trainset* set, size_t index, double* input, double* target, size_t len);
AN_API void an_trainset_free(an_trainset* set);

/* ---- stacked denoising autoencoder ------------------------------------- */

typedef struct an_train_config {
  double learning_rate;
  double momentum;
  uint32_t epochs;
  uint32_t batch_size;
  double lambda_sparse;
  double smooth_eps;
  double validation_fraction;
  uint64_t seed;
} an_train_config;

AN_API void an_train_config_default(an_train_config* config);

/* Default architecture for n x n images and the given depth. Writes up to
 * `capacity` entries and stores the full length in *len. */
AN_API an_status an_default_dims(uint32_t n, uint32_t depth, uint32_t* dims, size_t capacity, size_t* len);

AN_API an_status an_model_train(const an_trainset* set, const uint32_t* dims, size_t dims_len,
                                const an_train_config* config, an_model** model, an_train_log** log);
AN_API an_status an_model_random(const uint32_t* dims, size_t dims_len, uint64_t seed, an_model** out);
AN_API an_status an_model_load(const char* path, an_model** out);
AN_API an_status an_model_save(const an_model* model, const char* path);
AN_API size_t an_model_depth(const an_model* model);
AN_API an_status an_model_dims(const an_model* model, uint32_t* dims, size_t capacity, size_t* len);
/* Reconstructs one vectorized (row-major) aliased image of model-input length. */
AN_API an_status an_model_reconstruct(const an_model* model, const double* aliased, double* out, size_t len);
/* As an_model_reconstruct, also reporting the matrix-vector products and
 * elementwise sigmoid passes the inference performed. */
AN_API an_status an_model_reconstruct_counted(const an_model* model, const double* aliased, double* out, size_t len,
                                              size_t* matvecs, size_t* sigmoid_passes);
AN_API void an_model_free(an_model* model);

AN_API size_t an_train_log_layers(const an_train_log* log);
AN_API size_t an_train_log_epochs(const an_train_log* log, size_t layer);
/* Per-sample costs after `epoch` (0-based); val is NaN without a validation split. */
AN_API an_status an_train_log_cost(const an_train_log* log, size_t layer, size_t epoch, double* train, double* val);
AN_API an_status an_train_log_write_csv(const an_train_log* log, size_t layer, const char* path);
AN_API void an_train_log_free(an_train_log* log);

/* ---- online reconstruction --------------------------------------------- */

typedef struct an_ista_config {
  double lambda;
  uint32_t max_iters;
  double tol;
  double step;
} an_ista_config;

AN_API void an_ista_config_default(an_ista_config* config);
AN_API an_status an_method_parse(const char* name, an_method* out);
AN_API const char* an_method_name(an_method method);

/* Causal sweep over all frames. `model` is required for AN_METHOD_SDAE and
 * ignored otherwise; `ista` may be NULL for defaults. */
AN_API an_status an_online_reconstruct(const an_kspace* kspace, const an_mask* mask, an_method method,
                                       const an_model* model, const an_ista_config* ista, an_recon** out);
AN_API size_t an_recon_frames(const an_recon* recon);
AN_API an_status an_recon_frame(const an_recon* recon, size_t index, double* out, size_t len);
AN_API double an_recon_latency(const an_recon* recon, size_t index);
AN_API size_t an_recon_iterations(const an_recon* recon, size_t index);
AN_API an_status an_recon_images(const an_recon* recon, an_sequence** out);
/* frame,iter,objective */
AN_API an_status an_recon_write_traces_csv(const an_recon* recon, const char* path);
AN_API void an_recon_free(an_recon* recon);

/* ---- metrics and benchmarking ------------------------------------------ */

AN_API an_status an_nmse(const double* est, const double* ref, uint32_t n, double* out);
AN_API an_status an_ssim(const double* est, const double* ref, uint32_t n, double dynamic_range, double* out);

typedef struct an_latency {
  double mean_s;
  double std_s;
  double fps;
  size_t frames;
} an_latency;

/* Reconstructs frame `index` into `out` (len pixels); returns 0 on success. */
typedef int (*an_frame_fn)(void* user, size_t index, double* out, size_t len);

AN_API an_status an_benchmark(an_frame_fn fn, void* user, uint32_t n, size_t frames, uint32_t warmup, uint32_t reps,
                              an_latency* out);

/* Times one method per frame. Diff CS frames start from the estimates of an
 * untimed causal pass so every timed call is a pure function of its frame. */
AN_API an_status an_benchmark_method(const an_kspace* kspace, const an_mask* mask, an_method method,
                                     const an_model* model, const an_ista_config* ista, uint32_t warmup,
                                     uint32_t reps, an_latency* out);

AN_API an_status an_metric_table_create(an_metric_table** out);
AN_API an_status an_metric_table_add(an_metric_table* table, const char* dataset, const char* method, size_t frame,
                                     double nmse, double ssim, double latency_s);
/* Scores every frame of `recon` against `truth` and appends the rows. */
AN_API an_status an_metric_table_add_recon(an_metric_table* table, const char* dataset, const char* method,
                                           const an_recon* recon, const an_sequence* truth);
AN_API size_t an_metric_table_rows(const an_metric_table* table);
/* dataset,method,frame,nmse,ssim,latency_s */
AN_API an_status an_metric_table_write_csv(const an_metric_table* table, const char* path);
/* dataset,method,frames,nmse_mean,nmse_std,ssim_mean,ssim_std,latency_mean_s */
AN_API an_status an_metric_table_write_summary_csv(const an_metric_table* table, const char* path);
/* Mean NMSE/SSIM of one (dataset, method) group. */
AN_API an_status an_metric_table_summary(const an_metric_table* table, const char* dataset, const char* method,
                                         double* nmse_mean, double* nmse_std, double* ssim_mean, double* ssim_std);
AN_API void an_metric_table_free(an_metric_table* table);

/* Shortest round-trip decimal text for `value`; returns chars written (< capacity). */
AN_API size_t an_format_number(double value, char* buf, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* ALIASNET_ALIASNET_H */
