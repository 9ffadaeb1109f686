/*
 * isacbf: ISAC transmit beamforming by dual ascent over the beampattern-MSE
 * multipliers with a fixed-point inner solver.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an isac_status; on
 * failure isac_last_error() describes the cause (thread-local, valid until
 * the next call on the same thread).
 */
#ifndef ISACBF_H
#define ISACBF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ISACBF_BUILDING)
#    define ISACBF_API __declspec(dllexport)
#  else
#    define ISACBF_API __declspec(dllimport)
#  endif
#else
#  define ISACBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isac_status {
  ISAC_OK = 0,
  ISAC_E_INVALID_INPUT = 1,
  ISAC_E_DIMENSION_MISMATCH = 2,
  ISAC_E_INDEX_OUT_OF_RANGE = 3,
  ISAC_E_DEGENERATE_RECOVERY = 4,
  ISAC_E_RECOVERY_FAILURE = 5,
  ISAC_E_INFEASIBLE = 6,
  ISAC_E_IO = 7,
  ISAC_E_PARSE = 8,
  ISAC_E_INTERNAL = 9,
  ISAC_E_NULL_ARGUMENT = 10,
  ISAC_E_BUFFER_TOO_SMALL = 11
} isac_status;

ISACBF_API const char* isac_status_string(isac_status status);
ISACBF_API const char* isac_last_error(void);
ISACBF_API const char* isac_version(void);

/* ---- scenarios -------------------------------------------------------- */

typedef struct isac_scenario isac_scenario;

typedef struct isac_gen_config {
  int users;     /* K */
  int antennas;  /* M */
  int grid_size; /* Q */
  double sector_deg;
  double eta_min, eta_max;         /* log-uniform */
  double gamma_db_min, gamma_db_max;
  double desired_min, desired_max;
  double noise_power;
  uint64_t seed;
} isac_gen_config;

ISACBF_API void isac_gen_config_default(isac_gen_config* cfg);

/* screen != 0 resamples (up to 50 times) until the outer loop converges;
 * resamples may be NULL. */
ISACBF_API isac_status isac_scenario_generate(const isac_gen_config* cfg,
                                              int screen,
                                              isac_scenario** out,
                                              int* resamples);
ISACBF_API isac_status isac_scenario_load(const char* path,
                                          isac_scenario** out);
ISACBF_API isac_status isac_scenario_save(const isac_scenario* s,
                                          const char* path);
ISACBF_API isac_status isac_scenario_dims(const isac_scenario* s,
                                          int* antennas, int* users,
                                          int* grid_size);
ISACBF_API isac_status isac_scenario_set_eta(isac_scenario* s, double eta);
ISACBF_API void isac_scenario_free(isac_scenario* s);

/* ---- outer solve ------------------------------------------------------ */

typedef struct isac_ascent_params {
  double alpha0;
  double rho;
  double epsilon;          /* absolute subgradient-norm stop */
  double relative_epsilon; /* stop also needs ||g|| <= rel * 2 sqrt(Q eta) */
  int max_outer;
  double alpha_min, alpha_max;
  int max_backtracks;
  int warm_start;
  double fpi_tol;
  int fpi_max_iter;
  double fpi_cap;
} isac_ascent_params;

ISACBF_API void isac_ascent_params_default(isac_ascent_params* p);

typedef enum isac_ascent_status {
  ISAC_ASCENT_CONVERGED = 0,
  ISAC_ASCENT_MAX_OUTER = 1,
  ISAC_ASCENT_STALLED = 2
} isac_ascent_status;

typedef struct isac_solution_summary {
  isac_ascent_status status;
  double objective;    /* total power sum_k tr(V_k) */
  double dual_value;   /* d~(lambda*) */
  double inner_value;  /* d(lambda*) */
  double grad_norm;
  int outer_iterations;
  double sinr_violation;
  double mse_violation;
  double solve_time_s;
} isac_solution_summary;

typedef struct isac_solution isac_solution;

/* params may be NULL for defaults. */
ISACBF_API isac_status isac_solve(const isac_scenario* s,
                                  const isac_ascent_params* params,
                                  isac_solution** out);
ISACBF_API isac_status isac_solution_summary_get(const isac_solution* sol,
                                                 isac_solution_summary* out);
/* Copies K powers / Q multipliers; len is the buffer capacity. */
ISACBF_API isac_status isac_solution_powers(const isac_solution* sol,
                                            double* out, size_t len);
ISACBF_API isac_status isac_solution_lambda(const isac_solution* sol,
                                            double* out, size_t len);
/* Row-major M x M covariance of user k as interleaved re/im (2*M*M doubles). */
ISACBF_API isac_status isac_solution_covariance(const isac_solution* sol,
                                                int user, double* out,
                                                size_t len);
ISACBF_API isac_status isac_solution_save(const isac_solution* sol,
                                          const char* path);
ISACBF_API isac_status isac_solution_write_log(const isac_solution* sol,
                                               const char* csv_path);
ISACBF_API void isac_solution_free(isac_solution* sol);

/* ---- inner GDB problem ------------------------------------------------ */

typedef struct isac_gdb isac_gdb;

typedef enum isac_verdict {
  ISAC_BOUNDED = 0,
  ISAC_UNBOUNDED = 1,
  ISAC_INDETERMINATE = 2
} isac_verdict;

typedef struct isac_gdb_summary {
  isac_verdict verdict;
  int iterations;
  double residual;
  double weighted_objective; /* tr(B sum V_k), valid when bounded */
  double total_power;
  double dual_objective;     /* sum beta_k sigma_k^2 */
} isac_gdb_summary;

/* Instance file with optional "B" or "lambda". */
ISACBF_API isac_status isac_gdb_load(const char* path, isac_gdb** out);
ISACBF_API isac_status isac_gdb_from_scenario(const isac_scenario* s,
                                              const double* lambda,
                                              size_t len, isac_gdb** out);
ISACBF_API isac_status isac_gdb_save(const isac_gdb* g, const char* path);
ISACBF_API isac_status isac_gdb_users(const isac_gdb* g, int* users);
/* beta0 may be NULL for 100 * 1; beta_out (K doubles) may be NULL. */
ISACBF_API isac_status isac_gdb_solve(const isac_gdb* g, const double* beta0,
                                      double tol, int max_iter,
                                      isac_gdb_summary* summary,
                                      double* beta_out);
/* inits: n_inits x K row-major; projected != 0 iterates max(I(beta), 0).
 * Writes trace_<i>.csv and, for K = 2, map_grid.csv under out_dir. */
ISACBF_API isac_status isac_gdb_emit_trace(const isac_gdb* g,
                                           const double* inits,
                                           size_t n_inits, int projected,
                                           const char* out_dir);
ISACBF_API void isac_gdb_free(isac_gdb* g);

/* ---- benchmark -------------------------------------------------------- */

enum {
  ISAC_METHOD_DUAL_FPI = 1,
  ISAC_METHOD_DUAL_SDP = 2,
  ISAC_METHOD_DIRECT_SDP = 4
};

typedef struct isac_bench_config {
  const int* cells; /* n_cells (K, M) pairs, flattened */
  size_t n_cells;
  int seeds;
  uint64_t first_seed; /* seeds first_seed .. first_seed + seeds - 1 */
  unsigned methods; /* ISAC_METHOD_* bitmask */
  int jobs;
  const char* oracle_command; /* NULL unless an SDP method is requested */
  const char* work_dir;       /* scratch space for oracle files */
  const isac_ascent_params* params; /* NULL for defaults */
} isac_bench_config;

/* Writes the aggregated report to report_csv and, when instances_csv is not
 * NULL, one row per (instance, method). */
ISACBF_API isac_status isac_bench_run(const isac_bench_config* cfg,
                                      const char* report_csv,
                                      const char* instances_csv);

#ifdef __cplusplus
}
#endif

#endif /* ISACBF_H */
