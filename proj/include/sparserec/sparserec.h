/*
 * C interface to the sparserec library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function (passing NULL is allowed). Every fallible call
 * returns an sr_status; on failure, sr_last_error() returns a message for the
 * calling thread that stays valid until that thread's next failing call.
 */
#ifndef SPARSEREC_H
#define SPARSEREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SR_API __declspec(dllexport)
#else
#define SR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
    SR_OK = 0,
    SR_ERR_INVALID_ARGUMENT = 1,
    SR_ERR_DIMENSION = 2,
    SR_ERR_NO_CONVERGENCE = 3,
    SR_ERR_COMBINATORIAL_GUARD = 4,
    SR_ERR_IO = 5,
    SR_ERR_PARSE = 6,
    SR_ERR_INTERNAL = 7
} sr_status;

typedef struct sr_matrix sr_matrix;
typedef struct sr_vector sr_vector;
typedef struct sr_problem sr_problem;
typedef struct sr_result sr_result;
typedef struct sr_experiment sr_experiment;

SR_API const char* sr_last_error(void);
SR_API const char* sr_status_name(sr_status status);
SR_API const char* sr_version(void);

/* ---- dense matrices and vectors ---------------------------------------- */

/* data is row-major, rows*cols doubles; copied. */
SR_API sr_status sr_matrix_create(size_t rows, size_t cols, const double* data, sr_matrix** out);
SR_API void sr_matrix_free(sr_matrix* m);
SR_API size_t sr_matrix_rows(const sr_matrix* m);
SR_API size_t sr_matrix_cols(const sr_matrix* m);
/* Copies rows*cols entries into dst (capacity in doubles). */
SR_API sr_status sr_matrix_copy_data(const sr_matrix* m, double* dst, size_t capacity);
SR_API sr_status sr_matrix_read_csv(const char* path, sr_matrix** out);
SR_API sr_status sr_matrix_write_csv(const sr_matrix* m, const char* path);

SR_API sr_status sr_vector_create(size_t length, const double* data, sr_vector** out);
SR_API void sr_vector_free(sr_vector* v);
SR_API size_t sr_vector_length(const sr_vector* v);
SR_API sr_status sr_vector_copy_data(const sr_vector* v, double* dst, size_t capacity);
SR_API sr_status sr_vector_read_csv(const char* path, sr_vector** out);
SR_API sr_status sr_vector_write_csv(const sr_vector* v, const char* path);

SR_API sr_status sr_matvec(const sr_matrix* m, const sr_vector* v, sr_vector** out);
/* tol <= 0 or max_iters == 0 select the defaults (1e-10, 10000). */
SR_API sr_status sr_operator_norm(const sr_matrix* m, double tol, size_t max_iters, double* out);
SR_API sr_status sr_frobenius_norm_sq(const sr_matrix* m, double* out);

/* ---- problem generation ------------------------------------------------- */

typedef enum sr_variance_mode { SR_VARIANCE_ONE_OVER_M = 0, SR_VARIANCE_UNIT = 1 } sr_variance_mode;
typedef enum sr_normalization { SR_NORM_OPERATOR_ONE = 0, SR_NORM_COLUMN_VARIANCE_ONE = 1 } sr_normalization;

SR_API sr_status sr_gaussian_matrix(size_t m, size_t d, sr_variance_mode mode, uint64_t seed, sr_matrix** out);
SR_API sr_status sr_normalize_operator_norm(const sr_matrix* m, sr_matrix** out);
SR_API sr_status sr_random_sparse_signal(size_t d, size_t s, uint64_t seed, sr_vector** out);
/* snr_db = +INFINITY yields zero noise. Either output may be NULL. */
SR_API sr_status sr_add_noise(const sr_vector* clean, double snr_db, uint64_t seed, sr_vector** noisy,
                              sr_vector** noise);

/* snr_db = +INFINITY for noiseless measurements. */
SR_API sr_status sr_problem_generate(size_t m, size_t d, size_t s, double snr_db, uint64_t seed,
                                     sr_normalization normalization, sr_problem** out);
/* Builds a problem from parts; ground_truth may be NULL. Inputs are copied. */
SR_API sr_status sr_problem_create(const sr_matrix* a, const sr_vector* y, size_t s, const sr_vector* ground_truth,
                                   sr_problem** out);
SR_API void sr_problem_free(sr_problem* p);
/* Directory bundle: A.csv, y.csv, xstar.csv, meta.json. */
SR_API sr_status sr_problem_save(const sr_problem* p, const char* dir);
SR_API sr_status sr_problem_load(const char* dir, sr_problem** out);
SR_API size_t sr_problem_m(const sr_problem* p);
SR_API size_t sr_problem_d(const sr_problem* p);
SR_API size_t sr_problem_sparsity(const sr_problem* p);
SR_API int sr_problem_has_ground_truth(const sr_problem* p);
/* Handles returned by the getters below are new copies owned by the caller. */
SR_API sr_status sr_problem_matrix(const sr_problem* p, sr_matrix** out);
SR_API sr_status sr_problem_measurements(const sr_problem* p, sr_vector** out);
SR_API sr_status sr_problem_ground_truth(const sr_problem* p, sr_vector** out);
SR_API sr_status sr_problem_effective_error(const sr_problem* p, sr_vector** out);

/* ---- recovery ----------------------------------------------------------- */

typedef enum sr_algorithm { SR_ALG_IHT = 0, SR_ALG_ILAT = 1 } sr_algorithm;
typedef enum sr_recovery_status { SR_RECOVERY_COMPLETED = 0, SR_RECOVERY_STOPPED = 1, SR_RECOVERY_DIVERGED = 2 }
    sr_recovery_status;

typedef struct sr_recovery_config {
    sr_algorithm algorithm;
    double eta;
    size_t sparsity;
    size_t max_iters;
    double stop_tolerance;
    int record_history;
} sr_recovery_config;

/* ILAT, eta 0.5, 1000 iterations, no early stop; sparsity must be set. */
SR_API sr_recovery_config sr_recovery_config_default(void);

SR_API sr_status sr_recover(const sr_problem* p, const sr_recovery_config* config, sr_result** out);
SR_API void sr_result_free(sr_result* r);
SR_API sr_status sr_result_estimate(const sr_result* r, sr_vector** out);
SR_API size_t sr_result_iterations(const sr_result* r);
SR_API size_t sr_result_gradient_evaluations(const sr_result* r);
SR_API sr_recovery_status sr_result_status(const sr_result* r);
SR_API size_t sr_result_history_length(const sr_result* r);
SR_API sr_status sr_result_residual_history(const sr_result* r, double* dst, size_t capacity);
/* Available when record_history was set and the problem had ground truth. */
SR_API sr_status sr_result_error_history(const sr_result* r, double* dst, size_t capacity);
SR_API sr_status sr_result_relative_error(const sr_result* r, const sr_vector* truth, double* out);
SR_API sr_status sr_check_success(const sr_result* r, const sr_vector* truth, double rel_tol, int* out);
/* result.json {estimate_csv_path, iterations, success, rel_error, residual_history};
 * the estimate is written to estimate_csv. truth may be NULL. */
SR_API sr_status sr_result_write(const sr_result* r, const sr_vector* truth, double rel_tol, const char* json_path,
                                 const char* estimate_csv);

/* ---- thresholding ------------------------------------------------------- */

SR_API sr_status sr_hard_threshold(const sr_vector* z, size_t s, sr_vector** out);
SR_API sr_status sr_lat_threshold(const sr_vector* z, const sr_matrix* a, const sr_vector* y, size_t s, double eta,
                                  sr_vector** out);
SR_API sr_status sr_cost_gradient(const sr_matrix* a, const sr_vector* y, const sr_vector* z, sr_vector** out);

/* ---- analysis ----------------------------------------------------------- */

SR_API sr_status sr_rip_exact(const sr_matrix* a, size_t s, double* out);
SR_API sr_status sr_rip_sampled(const sr_matrix* a, size_t s, size_t n_supports, uint64_t seed, double* out);

typedef struct sr_certificate {
    double noiseless_rho;
    int noiseless_condition_met;
    double noisy_rho;
    int noisy_condition_met;
    /* +INFINITY when the noisy condition fails */
    double noise_floor;
} sr_certificate;

SR_API sr_status sr_certify(double delta_2s, double eta, double e_tilde_norm, sr_certificate* out);

typedef struct sr_avg_case_bound {
    double rho;
    double eta_valid_upper;
    double eta_star;
    double expected_frob_residual;
    double expected_frob_gram;
} sr_avg_case_bound;

SR_API sr_status sr_avg_case(size_t m, size_t d, double eta, sr_avg_case_bound* out);

typedef struct sr_moment_row {
    double eta;
    double predicted_residual;
    double mc_residual;
    double predicted_gram;
    double mc_gram;
    double rel_err;
} sr_moment_row;

typedef struct sr_column_moments {
    double mean_entry;
    double mean_entry_sq;
    double mean_inner_sq;
    double mean_col_norm4;
} sr_column_moments;

/* rows must hold n_eta entries; columns may be NULL. */
SR_API sr_status sr_validate_moments(size_t m, size_t d, const double* etas, size_t n_eta, size_t draws,
                                     uint64_t seed, size_t workers, sr_moment_row* rows, sr_column_moments* columns);
/* CSV with header eta,predicted_residual,mc_residual,predicted_gram,mc_gram,rel_err */
SR_API sr_status sr_write_moments_csv(const sr_moment_row* rows, size_t n_rows, const char* path);

/* ---- experiments -------------------------------------------------------- */

typedef enum sr_experiment_kind {
    SR_EXP_PHASE_TRANSITION = 0,
    SR_EXP_NOISY_ERROR = 1,
    SR_EXP_CONSTANT_COMPUTE = 2,
    SR_EXP_THRESHOLD_COMPARE = 3
} sr_experiment_kind;

typedef struct sr_experiment_spec {
    sr_experiment_kind kind;
    size_t m;
    size_t d;
    const size_t* sparsity_grid;
    size_t n_sparsity;
    const double* eta_grid;
    size_t n_eta;
    size_t trials_per_point;
    size_t iters_iht;
    size_t iters_ilat;
    int has_snr;
    double snr_db;
    uint64_t base_seed;
    double success_rel_tol;
} sr_experiment_spec;

typedef enum sr_method { SR_METHOD_IHT = 0, SR_METHOD_ILAT = 1, SR_METHOD_HARD = 2, SR_METHOD_LAT = 3 } sr_method;

typedef struct sr_trial_record {
    size_t trial;
    uint64_t seed;
    size_t s;
    double eta; /* NaN for baselines */
    sr_method algorithm;
    size_t iterations;
    size_t gradient_evaluations;
    int success;
    double rel_error;
    int has_threshold_ratio;
    double threshold_ratio;
    double runtime_ms;
} sr_trial_record;

/* Fills defaults (128x256, 100 trials, 1000 iterations, tol 1e-4); grids stay NULL. */
SR_API sr_experiment_spec sr_experiment_spec_default(sr_experiment_kind kind);
/* workers == 0 uses the available hardware parallelism. */
SR_API sr_status sr_experiment_run(const sr_experiment_spec* spec, size_t workers, sr_experiment** out);
SR_API void sr_experiment_free(sr_experiment* e);
SR_API size_t sr_experiment_record_count(const sr_experiment* e);
SR_API sr_status sr_experiment_record(const sr_experiment* e, size_t index, sr_trial_record* out);
/* results.csv, summary.csv, spec.json */
SR_API sr_status sr_experiment_write(const sr_experiment* e, const char* dir);

/* ---- plotting ----------------------------------------------------------- */

typedef enum sr_plot_kind { SR_PLOT_SUCCESS = 0, SR_PLOT_ERROR = 1, SR_PLOT_RATIO = 2 } sr_plot_kind;

SR_API sr_status sr_emit_plot(const char* summary_csv, sr_plot_kind kind, const char* out_svg);

#ifdef __cplusplus
}
#endif

#endif /* SPARSEREC_H */
