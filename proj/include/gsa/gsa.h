/* gsa - variance-based global sensitivity analysis toolkit.
 *
 * C interface over the core library: opaque handles, status codes, and a
 * thread-local error message. Every function returning gsa_status leaves its
 * outputs untouched on failure.
 */
#ifndef GSA_H
#define GSA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef GSA_API
#define GSA_API __attribute__((visibility("default")))
#endif

typedef enum gsa_status {
    GSA_OK = 0,
    GSA_ERR_ARGUMENT = 1,
    GSA_ERR_CAPACITY = 2,
    GSA_ERR_DEGENERATE_MODEL = 3,
    GSA_ERR_IO = 4,
    GSA_ERR_PARSE = 5,
    GSA_ERR_EVALUATION = 6,
    GSA_ERR_INFEASIBLE = 7,
    GSA_ERR_INTERNAL = 8
} gsa_status;

GSA_API const char* gsa_status_name(gsa_status status);
/* Message for the most recent failure on this thread. */
GSA_API const char* gsa_last_error(void);
GSA_API const char* gsa_version(void);

/* ---------------- quasi-random point sets ---------------- */

typedef struct gsa_points gsa_points;

/* Highest supported sequence dimension of the bundled direction table. */
GSA_API int gsa_sobol_max_dims(void);

/* Sobol' points at sequence indices skip..skip+count-1 (index 0 is the
 * origin; pass skip=1 for the usual convention). */
GSA_API gsa_status gsa_points_sobol(int dims, size_t count, uint64_t skip, gsa_points** out);
/* Seed-derived column permutation, optionally with a digital shift mod 1. */
GSA_API gsa_status gsa_points_randomize(const gsa_points* pts, uint64_t seed, int digital_shift,
                                        gsa_points** out);
GSA_API gsa_status gsa_points_read_csv(const char* path, gsa_points** out);
GSA_API gsa_status gsa_points_write_csv(const gsa_points* pts, const char* path);
GSA_API int gsa_points_dims(const gsa_points* pts);
GSA_API size_t gsa_points_count(const gsa_points* pts);
GSA_API gsa_status gsa_points_get(const gsa_points* pts, size_t row, int col, double* out);
/* Root-mean-square L2 discrepancy of the set. */
GSA_API gsa_status gsa_points_l2_discrepancy(const gsa_points* pts, double* out);
GSA_API void gsa_points_free(gsa_points* pts);

/* ---------------- evaluation designs ---------------- */

typedef struct gsa_design gsa_design;

typedef struct gsa_budget {
    int64_t total_runs;    /* N_T */
    int64_t total_effects; /* E_T */
    double economy;        /* E_T / N_T */
    int64_t explored;      /* nN */
} gsa_budget;

/* scheme is "asym" or "sym". */
GSA_API gsa_status gsa_design_budget(int factors, int matrices, int64_t rows, const char* scheme,
                                     gsa_budget* out);

/* Build a run schedule plus effect-pair index from Sobol' bases: an
 * n*k-dimension block starting at `skip`, columns permuted jointly by `seed`
 * (0 = no permutation), split into n base matrices. */
GSA_API gsa_status gsa_design_build(int factors, int matrices, int64_t rows, const char* scheme,
                                    uint64_t seed, uint64_t skip, gsa_design** out);
GSA_API gsa_status gsa_design_write_csv(const gsa_design* design, const char* runs_path,
                                        const char* pairs_path);
GSA_API gsa_status gsa_design_read_csv(const char* runs_path, const char* pairs_path,
                                       gsa_design** out);
GSA_API int64_t gsa_design_runs(const gsa_design* design);
GSA_API int64_t gsa_design_pairs(const gsa_design* design);
GSA_API void gsa_design_free(gsa_design* design);

/* Coordinate-reuse accounting: how often a generic coordinate of the base
 * matrix (resp. a donor matrix) appears among the runs. */
GSA_API gsa_status gsa_reuse_counts(int factors, int matrices, int64_t rows, const char* scheme,
                                    int64_t* base_usage, int64_t* donor_usage, int64_t* runs_total);

typedef struct gsa_plan_row {
    int matrices;
    int64_t rows; /* N, power of two; 0 when infeasible */
    gsa_budget budget;
    double discrepancy; /* of the concatenated base matrices; NaN unless requested */
    int feasible;
} gsa_plan_row;

/* For each candidate n, the largest power-of-two N with N_T within
 * target_runs * tolerance (pass tolerance <= 0 for the default 1.25). */
GSA_API gsa_status gsa_plan(int factors, int64_t target_runs, const char* scheme,
                            const int* n_candidates, size_t n_count, double tolerance,
                            int with_discrepancy, gsa_plan_row* out_rows, size_t* out_count);

/* ---------------- models ---------------- */

typedef struct gsa_model gsa_model;

/* Sobol' G function with coefficients a_1..a_k. */
GSA_API gsa_status gsa_model_g(const double* a, int factors, gsa_model** out);
/* Built-in test models: "sum", "x1". */
GSA_API gsa_status gsa_model_builtin(const char* id, int factors, gsa_model** out);
/* External model protocol: the library writes input_path as CSV (x1..xk, one
 * row per run), runs `command` through the shell, and reads output_path as
 * one decimal value per line, order preserving. timeout_seconds <= 0 means
 * no limit. */
GSA_API gsa_status gsa_model_external(const char* command, const char* input_path,
                                      const char* output_path, double timeout_seconds, int factors,
                                      gsa_model** out);
GSA_API gsa_status gsa_model_eval_point(const gsa_model* model, const double* x, int factors,
                                        double* out);
/* Evaluate every run in a runs.csv file; writes a one-column y CSV. */
GSA_API gsa_status gsa_model_eval_csv(const gsa_model* model, const char* runs_csv,
                                      const char* y_csv);
GSA_API void gsa_model_free(gsa_model* model);

/* Closed-form G indices: fills S[0..k-1], T[0..k-1] and the total variance. */
GSA_API gsa_status gsa_g_analytic(const double* a, int factors, double* first_order,
                                  double* total_effect, double* variance);

/* ---------------- estimation ---------------- */

typedef struct gsa_report gsa_report;

/* estimator is "saltenis", "corr" or "corr-corrected"; first_order != 0 adds
 * S estimates (needs a design whose donor base rows were evaluated). */
GSA_API gsa_status gsa_estimate(const gsa_design* design, const double* y, size_t y_len,
                                const char* estimator, int first_order, gsa_report** out);
GSA_API gsa_status gsa_estimate_csv(const char* runs_csv, const char* pairs_csv, const char* y_csv,
                                    const char* estimator, int first_order, gsa_report** out);
GSA_API int gsa_report_factors(const gsa_report* report);
GSA_API double gsa_report_variance(const gsa_report* report);
GSA_API gsa_status gsa_report_total(const gsa_report* report, int factor, double* out);
GSA_API gsa_status gsa_report_first(const gsa_report* report, int factor, double* out);
GSA_API gsa_status gsa_report_pairs_used(const gsa_report* report, int factor, int64_t* out);
GSA_API gsa_status gsa_report_write_json(const gsa_report* report, const char* path);
GSA_API void gsa_report_free(gsa_report* report);

/* ---------------- adaptive sampling ---------------- */

typedef struct gsa_adaptive_config {
    uint64_t warmup_rows;     /* N_TS, default 32 */
    double delta;             /* oscillation threshold, default 1e-4 */
    int window;               /* trailing window p, default 19 */
    uint64_t total_budget;    /* max model evaluations */
    double probability_floor; /* default 1e-6 */
    uint64_t seed;            /* roulette draws */
    uint64_t sequence_seed;   /* column permutation, 0 = none */
    uint64_t skip;            /* first sequence row, default 1 */
} gsa_adaptive_config;

GSA_API void gsa_adaptive_config_init(gsa_adaptive_config* cfg);
/* Runs the Russian-roulette sampler. trace_csv may be NULL; final_report may
 * be NULL. The report carries the last checkpoint's T estimates. */
GSA_API gsa_status gsa_adaptive_run(const gsa_model* model, int factors,
                                    const gsa_adaptive_config* cfg, const char* trace_csv,
                                    gsa_report** final_report);

/* ---------------- benchmark harness ---------------- */

/* Runs the MAE-vs-cost benchmark described by a key=value config file and
 * writes per-repetition and aggregated rows to results_csv. any_infeasible is
 * set to 1 when some contender could not meet a grid point. */
GSA_API gsa_status gsa_bench_run(const char* config_path, const char* results_csv,
                                 int* any_infeasible);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GSA_H */
