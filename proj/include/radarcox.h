/*
 * radarcox — stochastic-geometry analysis of automotive radar networks.
 *
 * C interface to the PLCP/BLCP radar network library: configuration handles,
 * closed-form detection metrics, Monte Carlo simulation, meta-distribution
 * reconstruction and parameter optimization. All functions returning
 * rcx_status set a thread-local error message retrievable with
 * rcx_last_error().
 */
#ifndef RADARCOX_H
#define RADARCOX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RCX_API __declspec(dllexport)
#else
#define RCX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcx_status {
  RCX_OK = 0,
  RCX_ERR_INVALID = 1,  /* bad argument or configuration */
  RCX_ERR_NUMERIC = 2,  /* quadrature/reconstruction failure */
  RCX_ERR_IO = 3,       /* file could not be read or written */
  RCX_ERR_DOMAIN = 4    /* parameter outside its mathematical domain */
} rcx_status;

RCX_API const char* rcx_version(void);
RCX_API const char* rcx_strerror(rcx_status status);
/* Detail message for the last failing call on this thread. */
RCX_API const char* rcx_last_error(void);

/* ------------------------------------------------------------------ */
/* configuration                                                       */
/* ------------------------------------------------------------------ */

typedef struct rcx_config rcx_config;

/* Default configuration: PLCP, lambda_L = lambda = 0.01, radar range 500 m,
 * target at 15 m, 30 dBsm mean RCS, alpha = 2, beta = 1 dB, beta_SF = 0.5,
 * full beamwidth 30 deg, ALOHA p = 1. */
RCX_API rcx_config* rcx_config_create(void);
RCX_API rcx_config* rcx_config_load(const char* json_path);
RCX_API rcx_config* rcx_config_clone(const rcx_config* cfg);
RCX_API void rcx_config_destroy(rcx_config* cfg);

/* Dotted key, e.g. "network.lambda", "geometry.beamwidth_deg" (FULL beam-
 * width in degrees), "radio.tx_prob", "run.seed". */
RCX_API rcx_status rcx_config_set(rcx_config* cfg, const char* key, const char* value);
RCX_API rcx_status rcx_config_get(const rcx_config* cfg, const char* key, char* buf,
                                  size_t bufsize);
RCX_API rcx_status rcx_config_validate(const rcx_config* cfg);
RCX_API rcx_status rcx_config_save(const rcx_config* cfg, const char* json_path);
/* Serialized JSON; writes up to bufsize-1 bytes plus a terminator. */
RCX_API rcx_status rcx_config_json(const rcx_config* cfg, char* buf, size_t bufsize);

/* ------------------------------------------------------------------ */
/* closed-form evaluation                                              */
/* ------------------------------------------------------------------ */

typedef struct rcx_analytic_result {
  double avg_line_length;      /* l_k(R), meters */
  double expected_targets;     /* n_k(R) */
  double detection_prob;       /* p_D */
  double expected_detections;  /* n_D */
  double mean_local_delay;     /* attempts; +inf when divergent */
} rcx_analytic_result;

RCX_API rcx_status rcx_analytic_eval(const rcx_config* cfg, rcx_analytic_result* out);

/* M_1..M_n of the SF meta-distribution at the configured beta_sf. */
RCX_API rcx_status rcx_moments(const rcx_config* cfg, int n, double* out);
/* Imaginary moment M_{ju}. */
RCX_API rcx_status rcx_moment_imag(const rcx_config* cfg, double u, double* out_re,
                                   double* out_im);

/* ------------------------------------------------------------------ */
/* Monte Carlo                                                         */
/* ------------------------------------------------------------------ */

typedef struct rcx_realization rcx_realization;

RCX_API rcx_realization* rcx_realization_sample(const rcx_config* cfg, uint64_t seed);
RCX_API void rcx_realization_destroy(rcx_realization* real);
RCX_API int rcx_realization_line_count(const rcx_realization* real);
RCX_API rcx_status rcx_realization_line(const rcx_realization* real, int index, double* theta,
                                        double* r);
RCX_API int rcx_realization_point_count(const rcx_realization* real);
RCX_API rcx_status rcx_realization_point(const rcx_realization* real, int index, int* line_index,
                                         double* x, double* y, double* v, double* w, int* active);

typedef struct rcx_sim_stats {
  double p_d;       /* mean conditional success probability */
  double p_d_se;    /* its standard error */
  uint64_t realizations;
} rcx_sim_stats;

/* Empirical meta-distribution F(t) = P(p_SF >= t) on the caller's grid,
 * using run.realizations, run.seed and run.threads from the config. */
RCX_API rcx_status rcx_simulate_md(const rcx_config* cfg, const double* t_grid, int grid_len,
                                   double* out_F, rcx_sim_stats* stats);
/* Empirical moment estimates with standard errors, orders 1..n. */
RCX_API rcx_status rcx_simulate_moments(const rcx_config* cfg, int n, double* out_mean,
                                        double* out_se);
/* Empirical estimate of a single moment of arbitrary real order (e.g. -1). */
RCX_API rcx_status rcx_simulate_moment_order(const rcx_config* cfg, double order,
                                             double* out_mean, double* out_se);

/* ------------------------------------------------------------------ */
/* meta-distribution reconstruction                                    */
/* ------------------------------------------------------------------ */

/* Chebyshev-Markov bound reconstruction from moments M_1..M_n. */
RCX_API rcx_status rcx_cm_reconstruct(const double* moments, int n, const double* t_grid,
                                      int grid_len, double* out_F);
/* Gil-Pelaez inversion using the configured network's imaginary moments.
 * tail_estimate (optional) receives the truncation-tail bound. */
RCX_API rcx_status rcx_gp_reconstruct(const rcx_config* cfg, const double* t_grid, int grid_len,
                                      double* out_F, double* tail_estimate);
RCX_API double rcx_ks_distance(const double* t_a, const double* f_a, int len_a, const double* t_b,
                               const double* f_b, int len_b);
/* Largest t with F(t) >= 1 - level. */
RCX_API rcx_status rcx_percentile_reliability(const double* t_grid, const double* f, int len,
                                              double level, double* out);

/* ------------------------------------------------------------------ */
/* optimization and sweeps                                             */
/* ------------------------------------------------------------------ */

typedef enum rcx_objective {
  RCX_OBJ_EXPECTED_DETECTIONS = 0,
  RCX_OBJ_DETECTION_PROB = 1,
  RCX_OBJ_MEAN_LOCAL_DELAY = 2,
  RCX_OBJ_AVG_LINE_LENGTH = 3,
  RCX_OBJ_EXPECTED_TARGETS = 4,
  RCX_OBJ_PERCENTILE_RELIABILITY = 5
} rcx_objective;

typedef enum rcx_parameter {
  RCX_PAR_BEAMWIDTH_DEG = 0,  /* full beamwidth, degrees */
  RCX_PAR_TX_PROB = 1,
  RCX_PAR_LAMBDA = 2,
  RCX_PAR_LAMBDA_L = 3,
  RCX_PAR_TARGET_RANGE = 4,
  RCX_PAR_R0 = 5,
  RCX_PAR_BETA_DB = 6,
  RCX_PAR_BETA_SF = 7,
  RCX_PAR_NB = 8
} rcx_parameter;

RCX_API rcx_status rcx_sweep(const rcx_config* cfg, rcx_objective objective,
                             rcx_parameter parameter, const double* grid, int len, double* out);

typedef struct rcx_opt_result {
  double argopt;
  double value;
  int multimodal;
} rcx_opt_result;

/* Optimal full beamwidth (degrees) maximizing expected detections. */
RCX_API rcx_status rcx_optimal_beamwidth(const rcx_config* cfg, double lo_deg, double hi_deg,
                                         rcx_opt_result* out);
/* Optimal ALOHA transmit probability minimizing the mean local delay. */
RCX_API rcx_status rcx_optimal_tx_prob(const rcx_config* cfg, double lo, double hi,
                                       rcx_opt_result* out);

#ifdef __cplusplus
}
#endif

#endif /* RADARCOX_H */
