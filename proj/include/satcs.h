/* satcs - sparse recovery from saturated measurements.
 *
 * C interface to the solver library: opaque handles, integer status codes,
 * thread-local error text. All matrices cross this boundary in row-major
 * order. Unless noted otherwise, functions return SATCS_OK on success and an
 * error status otherwise; satcs_last_error() describes the most recent
 * failure on the calling thread.
 */
#ifndef SATCS_H
#define SATCS_H

#include <math.h>
#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SATCS_BUILD)
#define SATCS_API __declspec(dllexport)
#else
#define SATCS_API __declspec(dllimport)
#endif
#else
#define SATCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum satcs_status {
  SATCS_OK = 0,
  SATCS_ERR_INVALID_ARGUMENT = 1,
  SATCS_ERR_DIMENSION_MISMATCH = 2,
  SATCS_ERR_CONFIG = 3,
  SATCS_ERR_IO = 4,
  SATCS_ERR_DIVERGED = 5,
  SATCS_ERR_INTERNAL = 6
} satcs_status;

typedef enum satcs_penalty_kind {
  SATCS_PENALTY_L1 = 0,
  SATCS_PENALTY_L0 = 1,
  SATCS_PENALTY_MCP = 2,
  SATCS_PENALTY_SORTED_L1 = 3
} satcs_penalty_kind;

/* Disables the norm-ball constraint when used as ball_radius. */
#define SATCS_UNBOUNDED HUGE_VAL

typedef struct satcs_dataset satcs_dataset;
typedef struct satcs_ground_truth satcs_ground_truth;
typedef struct satcs_penalty satcs_penalty;
typedef struct satcs_result satcs_result;
typedef struct satcs_spec satcs_spec;

typedef struct satcs_solver_config {
  double gamma;       /* saturated-loss trade-off, >= 0 */
  double ball_radius; /* solution norm bound; SATCS_UNBOUNDED to disable */
  double rho;         /* ADMM quadratic coupling, > 0 */
  double eps_abs;
  double eps_rel;
  int max_iter;
  int adaptive_rho;      /* nonzero enables residual balancing */
  int record_objective;  /* nonzero records the objective in the trace */
} satcs_solver_config;

SATCS_API const char* satcs_version(void);
SATCS_API const char* satcs_status_string(satcs_status status);

/* Message for the last failure observed on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next call on the
 * same thread. */
SATCS_API const char* satcs_last_error(void);

/* ---- datasets ------------------------------------------------------- */

/* Split clipped measurements (phi m-by-n row-major, y length m) into
 * unsaturated and saturated parts at the thresholds. */
SATCS_API satcs_status satcs_dataset_partition(const double* phi, const double* y,
                                               int m, int n, double y_min,
                                               double y_max, satcs_dataset** out);
SATCS_API satcs_status satcs_dataset_load(const char* dir, satcs_dataset** out);
SATCS_API satcs_status satcs_dataset_save(const satcs_dataset* ds, const char* dir);
SATCS_API satcs_status satcs_dataset_dims(const satcs_dataset* ds, int* n, int* m1,
                                          int* m2);
SATCS_API satcs_status satcs_dataset_thresholds(const satcs_dataset* ds,
                                                double* y_min, double* y_max);
/* Copy out the unsaturated block: phi1 is m1*n row-major, y1 length m1.
 * Either pointer may be NULL to skip that block. */
SATCS_API satcs_status satcs_dataset_part1(const satcs_dataset* ds, double* phi1,
                                           double* y1);
/* Copy out the saturated block: phi2 is m2*n row-major, y2 length m2, s2
 * length m2 (+1 clipped high, -1 clipped low). NULL pointers skip blocks. */
SATCS_API satcs_status satcs_dataset_part2(const satcs_dataset* ds, double* phi2,
                                           double* y2, int* s2);
SATCS_API void satcs_dataset_free(satcs_dataset* ds);

/* ---- ground truth ---------------------------------------------------- */

SATCS_API satcs_status satcs_ground_truth_load(const char* path,
                                               satcs_ground_truth** out);
SATCS_API satcs_status satcs_ground_truth_save(const satcs_ground_truth* gt,
                                               const char* path);
SATCS_API satcs_status satcs_ground_truth_dim(const satcs_ground_truth* gt, int* n,
                                              int* k);
SATCS_API satcs_status satcs_ground_truth_signal(const satcs_ground_truth* gt,
                                                 double* out, int len);
SATCS_API void satcs_ground_truth_free(satcs_ground_truth* gt);

/* ---- penalties ------------------------------------------------------- */

SATCS_API satcs_status satcs_penalty_l1(double nu, satcs_penalty** out);
SATCS_API satcs_status satcs_penalty_l0(double nu, satcs_penalty** out);
SATCS_API satcs_status satcs_penalty_mcp(double nu, double b, satcs_penalty** out);
/* weights: length n, nonincreasing, nonnegative. */
SATCS_API satcs_status satcs_penalty_sorted_l1(double nu, const double* weights,
                                               int n, satcs_penalty** out);
SATCS_API satcs_status satcs_penalty_info(const satcs_penalty* p,
                                          satcs_penalty_kind* kind, double* nu);
SATCS_API void satcs_penalty_free(satcs_penalty* p);

/* Two-level sorted-L1 weight profile: weight 1 on the n - k_hat smallest
 * ranks, top_weight on the k_hat largest. */
SATCS_API satcs_status satcs_make_sl1_weights(int n, int k_hat, double top_weight,
                                              double* out);

/* ---- solver ----------------------------------------------------------- */

SATCS_API void satcs_solver_config_default(satcs_solver_config* config);

SATCS_API satcs_status satcs_solve(const satcs_dataset* ds,
                                   const satcs_penalty* penalty,
                                   const satcs_solver_config* config,
                                   satcs_result** out);

/* Plain LASSO min nu ||x||_1 + 0.5 ||phi x - y||^2 on the unsaturated part
 * only, via the same ADMM machinery (no saturation term, no norm ball). */
SATCS_API satcs_status satcs_solve_lasso(const satcs_dataset* ds, double nu,
                                         const satcs_solver_config* config,
                                         satcs_result** out);

SATCS_API satcs_status satcs_result_dim(const satcs_result* r, int* n);
SATCS_API satcs_status satcs_result_solution(const satcs_result* r, double* out,
                                             int len);
SATCS_API satcs_status satcs_result_stats(const satcs_result* r, int* iterations,
                                          int* converged, double* wall_time,
                                          double* max_z_norm,
                                          double* final_objective);
/* Residuals of iteration `iter` (1-based). objective is NaN unless the solve
 * recorded objectives. */
SATCS_API satcs_status satcs_result_residual(const satcs_result* r, int iter,
                                             double* primal, double* dual,
                                             double* objective);
SATCS_API satcs_status satcs_result_write_trace(const satcs_result* r,
                                                const char* path);
SATCS_API void satcs_result_free(satcs_result* r);

/* ---- experiment specs ------------------------------------------------- */

SATCS_API satcs_status satcs_spec_create(satcs_spec** out);
SATCS_API satcs_status satcs_spec_load(const char* path, satcs_spec** out);
SATCS_API satcs_status satcs_spec_set_seed(satcs_spec* spec, uint64_t seed);
SATCS_API satcs_status satcs_spec_seed(const satcs_spec* spec, uint64_t* seed);
SATCS_API satcs_status satcs_spec_dims(const satcs_spec* spec, int* n, int* m,
                                       int* k);
SATCS_API satcs_status satcs_spec_solver_config(const satcs_spec* spec,
                                                satcs_solver_config* config);
SATCS_API satcs_status satcs_spec_harness(const satcs_spec* spec, double* mcp_b,
                                          double* sl1_top_weight);
SATCS_API void satcs_spec_free(satcs_spec* spec);

/* ---- synthetic data ---------------------------------------------------- */

/* Instance `trial` of the spec's protocol. Either output may be NULL. */
SATCS_API satcs_status satcs_synthesize(const satcs_spec* spec, uint64_t trial,
                                        satcs_dataset** ds,
                                        satcs_ground_truth** gt);

/* K-sparse unit-norm signal into out (length n). */
SATCS_API satcs_status satcs_generate_signal(int n, int k, uint64_t seed,
                                             double* out);

/* ---- metrics and theory ------------------------------------------------ */

SATCS_API satcs_status satcs_snr(const double* x_bar, const double* x_hat, int n,
                                 double* out);
SATCS_API satcs_status satcs_angular_error(const double* x_bar, const double* x_hat,
                                           int n, double* out, int* degenerate);
SATCS_API satcs_status satcs_nnz(const double* x, int n, double tol, int* out);

SATCS_API satcs_status satcs_lambda_numeric(double threshold_t, double* out);
SATCS_API satcs_status satcs_estimate_lambda(double threshold_t, const double* x_bar,
                                             int n, long samples, uint64_t seed,
                                             double* lambda_hat, double* std_err);
SATCS_API satcs_status satcs_lemma1_vector_check(double threshold_t,
                                                 const double* x_bar, int n,
                                                 long samples, uint64_t seed,
                                                 double* max_dev);

SATCS_API satcs_status satcs_theorem1_bound_l1(double p, double nu, int k,
                                               double gamma, double lambda,
                                               double* out);
SATCS_API satcs_status satcs_theorem1_bound_l0(double p, double nu, int k,
                                               double gamma, double lambda,
                                               double* out);

/* ---- harness ------------------------------------------------------------ */

/* K-fold CV of the LASSO penalty level (per-measurement normalization) over
 * an explicit grid, or over the default log-spaced grid. */
SATCS_API satcs_status satcs_cross_validate_nu(const satcs_dataset* ds,
                                               const double* grid, int grid_len,
                                               int folds, uint64_t seed,
                                               double* out);
SATCS_API satcs_status satcs_cross_validate_default(const satcs_dataset* ds,
                                                    int folds, uint64_t seed,
                                                    double* out);

/* Double nu from nu_start until the support is no larger than l1_nnz. */
SATCS_API satcs_status satcs_calibrate_penalty(const satcs_dataset* ds,
                                               satcs_penalty_kind kind,
                                               int l1_nnz, double nu_start,
                                               double mcp_b, double sl1_top_weight,
                                               const satcs_solver_config* config,
                                               satcs_penalty** out);

/* Full benchmark sweep; writes sweep_raw.csv and sweep_agg.csv to out_dir. */
SATCS_API satcs_status satcs_sweep_run(const satcs_spec* spec, const char* axis,
                                       const double* values, int n_values,
                                       int threads, const char* out_dir,
                                       int verbose);

/* Timing table over (m, n) cells; writes one CSV to out_csv. */
SATCS_API satcs_status satcs_bench_run(const satcs_spec* spec, const int* ms,
                                       const int* ns, int n_cells,
                                       const char* out_csv, int verbose);

/* Per-method two-column series files from an aggregated sweep CSV. */
SATCS_API satcs_status satcs_plot_series(const char* agg_csv, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SATCS_H */
