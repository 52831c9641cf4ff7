/*
 * toalift C API.
 *
 * Every fallible call returns a toa_status; on failure toa_last_error() holds a
 * message for the calling thread until its next failing call. Handles are
 * opaque, owned by the caller and released with the matching *_destroy.
 * Strings returned through char** are released with toa_string_free.
 *
 * Parameter vectors are flat: (x, y[, z]) for F1/F2 and (x, y[, z], lambda)
 * for FL1/FL2.
 */
#ifndef TOALIFT_H
#define TOALIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOA_BUILDING_LIBRARY)
#define TOA_API __attribute__((visibility("default")))
#else
#define TOA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum toa_status {
  TOA_OK = 0,
  TOA_ERR_INVALID_ARGUMENT = 1, /* precondition or dimension mismatch */
  TOA_ERR_NON_DIFFERENTIABLE = 2,
  TOA_ERR_GENERATION = 3, /* random generator gave up */
  TOA_ERR_CONFIG = 4,     /* malformed JSON / config / CSV */
  TOA_ERR_IO = 5,
  TOA_ERR_INTERNAL = 6
} toa_status;

typedef enum toa_objective { TOA_F1 = 0, TOA_F2 = 1, TOA_FL1 = 2, TOA_FL2 = 3 } toa_objective;

typedef enum toa_termination {
  TOA_TERM_FTOL = 0,
  TOA_TERM_XTOL = 1,
  TOA_TERM_OPTIMALITY = 2,
  TOA_TERM_MAX_ITER = 3,
  TOA_TERM_MAX_FEVAL = 4
} toa_termination;

typedef enum toa_class {
  TOA_CLASS_MINIMUM = 0,
  TOA_CLASS_SADDLE = 1,
  TOA_CLASS_MAXIMUM = 2,
  TOA_CLASS_DEGENERATE = 3,
  TOA_CLASS_NOT_STATIONARY = 4
} toa_class;

typedef enum toa_basin_label { TOA_BASIN_GLOBAL = 0, TOA_BASIN_LOCAL = 1, TOA_BASIN_DIVERGED = 2 } toa_basin_label;

typedef enum toa_gate_measure { TOA_GATE_SPREAD = 0, TOA_GATE_COVARIANCE = 1 } toa_gate_measure;

typedef enum toa_damping_scale { TOA_DAMPING_IDENTITY = 0, TOA_DAMPING_JACOBIAN = 1 } toa_damping_scale;

typedef struct toa_scenario toa_scenario;
typedef struct toa_result toa_result;
typedef struct toa_campaign toa_campaign;
typedef struct toa_basin toa_basin;

TOA_API const char* toa_version(void);
TOA_API const char* toa_last_error(void);
TOA_API const char* toa_status_string(toa_status status);
TOA_API const char* toa_objective_name(toa_objective kind);
TOA_API toa_status toa_objective_parse(const char* name, toa_objective* out);
TOA_API void toa_string_free(char* s);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct toa_generator_config {
  int dim;
  int n_stations;
  double cube_side;
  double min_normalized_sv;
  toa_gate_measure gate_measure;
  uint64_t seed;
} toa_generator_config;

TOA_API void toa_generator_config_default(toa_generator_config* cfg);

/* stations: n_stations x dim, row-major. */
TOA_API toa_status toa_scenario_create(const double* stations, size_t n_stations, size_t dim,
                                       const double* ground_truth, toa_scenario** out);
TOA_API toa_status toa_scenario_from_json(const char* json, toa_scenario** out);
TOA_API toa_status toa_scenario_load(const char* path, toa_scenario** out);
TOA_API toa_status toa_scenario_random(const toa_generator_config* cfg, toa_scenario** out);
/* Uniform point in the generator cube drawn from cfg->seed. */
TOA_API toa_status toa_random_position(const toa_generator_config* cfg, double* out, size_t capacity);
/* b_values has s2 entries. */
TOA_API toa_status toa_scenario_planted(double x_g, int s1, int s2, const double* b_values, toa_scenario** out);
TOA_API toa_status toa_scenario_planted_load(const char* path, toa_scenario** out);
TOA_API toa_status toa_scenario_to_json(const toa_scenario* s, char** out);
TOA_API size_t toa_scenario_dim(const toa_scenario* s);
TOA_API size_t toa_scenario_size(const toa_scenario* s);
TOA_API toa_status toa_scenario_distances(const toa_scenario* s, double* out, size_t capacity);
TOA_API toa_status toa_scenario_ground_truth(const toa_scenario* s, double* out, size_t capacity);
TOA_API void toa_scenario_destroy(toa_scenario* s);

/* ---- objectives --------------------------------------------------------- */

TOA_API toa_status toa_evaluate(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                                double* value);
TOA_API toa_status toa_gradient(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                                double* gradient);
/* hessian: n_params x n_params, row-major. */
TOA_API toa_status toa_hessian(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                               double* hessian);

/* ---- solver ------------------------------------------------------------- */

typedef struct toa_solver_settings {
  int max_iterations;
  int max_function_evals; /* 0: 100 per variable */
  double f_tol;
  double x_tol;
  double optimality_tol;
  double initial_damping;
  toa_damping_scale damping_scale;
  int record_trace;
} toa_solver_settings;

TOA_API void toa_solver_settings_default(toa_solver_settings* settings);
TOA_API toa_status toa_solver_settings_load(const char* path, toa_solver_settings* out);

/* settings may be NULL for defaults. */
TOA_API toa_status toa_solve(const toa_scenario* s, toa_objective kind, const double* x0, size_t n_params,
                             const toa_solver_settings* settings, toa_result** out);
TOA_API size_t toa_result_size(const toa_result* r);
TOA_API toa_status toa_result_final_point(const toa_result* r, double* out, size_t capacity);
TOA_API double toa_result_final_value(const toa_result* r);
TOA_API double toa_result_error(const toa_result* r);
TOA_API int toa_result_iterations(const toa_result* r);
TOA_API toa_termination toa_result_termination(const toa_result* r);
TOA_API size_t toa_result_trace_length(const toa_result* r);
TOA_API toa_status toa_result_trace_point(const toa_result* r, size_t step, double* out, size_t capacity);
TOA_API toa_status toa_result_to_json(const toa_result* r, char** out);
/* Columns step,x,y[,z],lambda,value. */
TOA_API toa_status toa_result_write_trace_csv(const toa_result* r, const char* path);
TOA_API void toa_result_destroy(toa_result* r);

/* ---- stationarity ------------------------------------------------------- */

/* grad_tol <= 0 selects 1e-6 * (1 + F); curv_tol < 0 selects 1e-8.
 * out_json may be NULL. */
TOA_API toa_status toa_classify(const toa_scenario* s, toa_objective kind, const double* params, size_t n_params,
                                double grad_tol, double curv_tol, toa_class* out_class, char** out_json);

/* ---- campaigns ---------------------------------------------------------- */

enum {
  TOA_KIND_F1 = 1u << TOA_F1,
  TOA_KIND_F2 = 1u << TOA_F2,
  TOA_KIND_FL1 = 1u << TOA_FL1,
  TOA_KIND_FL2 = 1u << TOA_FL2,
  TOA_KIND_ALL = 0xFu
};

typedef struct toa_campaign_config {
  toa_generator_config generator;
  int trials;
  unsigned kinds_mask; /* TOA_KIND_* bits; solved in F1, F2, FL1, FL2 order */
  int threads;
  int audit_saddles;
  toa_solver_settings solver;
} toa_campaign_config;

typedef struct toa_benchmark_row {
  int n_stations;
  toa_objective kind;
  double mean_error;
  double std_error;
  int failure_count;
  int trial_count;
  int solver_errors;
} toa_benchmark_row;

typedef struct toa_saddle_audit {
  int failures;
  int verified_minima;
  int saddles;
  int counterexamples;
} toa_saddle_audit;

TOA_API void toa_campaign_config_default(toa_campaign_config* cfg);
TOA_API toa_status toa_campaign_config_load(const char* path, toa_campaign_config* out);
TOA_API toa_status toa_campaign_run(const toa_campaign_config* cfg, toa_campaign** out);
TOA_API size_t toa_campaign_row_count(const toa_campaign* c);
TOA_API toa_status toa_campaign_row(const toa_campaign* c, size_t index, toa_benchmark_row* out);
/* kind must be TOA_F1 or TOA_F2; an all-zero audit when nothing was audited. */
TOA_API toa_status toa_campaign_audit(const toa_campaign* c, toa_objective kind, toa_saddle_audit* out);
TOA_API toa_status toa_campaign_write_csv(const toa_campaign* c, const char* rows_path, const char* trials_path);
TOA_API void toa_campaign_destroy(toa_campaign* c);

/* ---- basin sweeps ------------------------------------------------------- */

typedef struct toa_basin_grid {
  double x_min;
  double x_max;
  double y_min;
  double y_max;
  double step;
} toa_basin_grid;

/* local_minima: n_local_minima x 2, row-major; settings may be NULL. */
TOA_API toa_status toa_basin_sweep(const toa_scenario* s, toa_objective kind, const toa_basin_grid* grid,
                                   const double* local_minima, size_t n_local_minima, double lambda0,
                                   const toa_solver_settings* settings, toa_basin** out);
TOA_API size_t toa_basin_nx(const toa_basin* b);
TOA_API size_t toa_basin_ny(const toa_basin* b);
TOA_API toa_basin_label toa_basin_label_at(const toa_basin* b, size_t ix, size_t iy);
TOA_API toa_status toa_basin_write_csv(const toa_basin* b, const char* path);
TOA_API void toa_basin_destroy(toa_basin* b);

#ifdef __cplusplus
}
#endif

#endif /* TOALIFT_H */
