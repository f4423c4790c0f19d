/* C interface to the packdim library.
 *
 * Every call returns a pd_status. On failure the message is available from
 * pd_last_error() on the calling thread until the next failing call there.
 * Strings returned through char** are owned by the caller and released with
 * pd_string_free. Requests and reports are JSON text.
 */
#ifndef PACKDIM_PACKDIM_H
#define PACKDIM_PACKDIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(PACKDIM_BUILDING)
#define PD_API __attribute__((visibility("default")))
#else
#define PD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pd_status {
  PD_OK = 0,
  PD_INVALID_ARGUMENT = 1,
  PD_NOT_POSITIVE_SEMIDEFINITE = 2,
  PD_GEOMETRY_INFEASIBLE = 3,
  PD_SCALE_UNREPRESENTABLE = 4,
  PD_OUT_OF_RANGE = 5,
  PD_INSUFFICIENT_SCALES = 6,
  PD_RESOLUTION = 7,
  PD_DEPTH_EXHAUSTED = 8,
  PD_INSUFFICIENT_DEPTH = 9,
  PD_REGIME = 10,
  PD_DEGENERATE_REGIME = 11,
  PD_INVALID_MAP = 12,
  PD_IO = 13,
  PD_CONFIG = 14,
  PD_INTERNAL = 15
} pd_status;

typedef enum pd_norm { PD_NORM_EUCLIDEAN = 0, PD_NORM_MAX = 1 } pd_norm;

typedef struct pd_measure pd_measure;

PD_API const char* pd_version(void);
PD_API const char* pd_status_name(pd_status s);
PD_API const char* pd_last_error(void);
PD_API void pd_string_free(char* s);
/* 0 selects the hardware concurrency. */
PD_API pd_status pd_set_threads(unsigned n);

PD_API pd_status pd_gaussian_cdf(double z, double* out);
/* P(|rho N - a| <= r) for a standard normal N. */
PD_API pd_status pd_gaussian_interval_prob(double rho, double a, double r, double* out);

/* coords: n points of dim coordinates, row-major; weights sum to 1. */
PD_API pd_status pd_measure_create(size_t dim, size_t n, const double* coords, const double* weights,
                                   pd_measure** out);
/* Uniform atoms j/n, j = 1..n, on the line. */
PD_API pd_status pd_measure_uniform_grid(size_t n, pd_measure** out);
/* Natural measure of the uniform Cantor set at the given level. */
PD_API pd_status pd_measure_cantor(unsigned branches, double ratio, size_t level, pd_measure** out);
PD_API pd_status pd_measure_read_csv(const char* path, pd_measure** out);
PD_API pd_status pd_measure_write_csv(const pd_measure* mu, const char* path);
PD_API void pd_measure_free(pd_measure* mu);
PD_API size_t pd_measure_dim(const pd_measure* mu);
PD_API size_t pd_measure_size(const pd_measure* mu);
PD_API pd_status pd_measure_ball_mass(const pd_measure* mu, const double* x, double r, pd_norm norm,
                                      double* out);

/* Dimension estimate of a measure. request:
 *   {"estimator": "ballmass" | "profile" | "Gd" | "Z_mu",
 *    "grid": {"j_min", "j_max", "base"}, "method": "tail-max" | "regression",
 *    "interior_only": bool, "beta" (profile), "n", "d" (Gd),
 *    "regime": {"alpha", "n", "d"}, "mode", "drift" (Z_mu)}
 * report: {"estimate", "method", "window", "guard_status", ...};
 * table (optional): CSV atom,scale,V,ratio. */
PD_API pd_status pd_estimate_json(const pd_measure* mu, const char* request, char** report, char** table);

/* Samples one path. request:
 *   {"regime": {"alpha", "n", "d"}, "points": [..] | {"grid": N},
 *    "drift": {...}, "seed", "replica", "route": "auto" | "cholesky"}
 * csv: t1..tn,x1..xd per row; sidecar: JSON with spec, drift, seed. */
PD_API pd_status pd_simulate_json(const char* request, char** csv, char** sidecar);

/* Per-level table of the oscillating set with parameter beta:
 * k,log_inv_delta,log_inv_eta,log_m,ratio_at_eta,ratio_at_delta */
PD_API pd_status pd_txset_csv(double beta, double delta0, size_t levels, char** csv);

PD_API pd_status pd_predict_json(double alpha, unsigned d, double beta, char** report);

/* check: "kernel-chain" | "doubling" | "parts" | "scale-doubling" | "eq-ar" |
 * "graph-expectation". options: {"trials", "seed", "beta", "per_decade",
 * "gamma", "alpha", "resolution", "branches", "ratio", "levels"}. */
PD_API pd_status pd_verify_json(const char* check, const char* options, char** report, int* passed);

PD_API pd_status pd_experiment_run(const char* config_path, const char* out_dir, char** report,
                                   int* passed);
PD_API pd_status pd_experiment_suite(const char* dir, const char* out_dir, char** summary_csv,
                                     int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
