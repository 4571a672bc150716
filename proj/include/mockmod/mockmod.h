#ifndef MOCKMOD_H
#define MOCKMOD_H

/* C interface to the mockmod kernel. Every function returns a status code;
   on failure mockmod_last_error() describes the problem (per thread).
   Strings handed out through char** are owned by the caller and released
   with mockmod_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(MOCKMOD_BUILDING_LIBRARY)
#define MOCKMOD_API __attribute__((visibility("default")))
#else
#define MOCKMOD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mockmod_status {
  MOCKMOD_OK = 0,
  MOCKMOD_E_DOMAIN = 1,
  MOCKMOD_E_VALIDATION = 2,
  MOCKMOD_E_NOT_INVERTIBLE = 3,
  MOCKMOD_E_POLE = 4,
  MOCKMOD_E_NUMERIC = 5,
  MOCKMOD_E_CONFIG = 6,
  MOCKMOD_E_IO = 7,
  MOCKMOD_E_INTERNAL = 8,
  MOCKMOD_E_ARGUMENT = 9
} mockmod_status;

typedef struct mockmod_config mockmod_config;
typedef struct mockmod_result mockmod_result;

MOCKMOD_API const char* mockmod_version(void);
MOCKMOD_API const char* mockmod_status_name(int status);
/* Message of the last failed call on this thread; "" when none. */
MOCKMOD_API const char* mockmod_last_error(void);
MOCKMOD_API void mockmod_string_free(char* s);

/* Suite configuration. Defaults: suite all, seed 1, trunc 200, f64,
   3 tau points, 10 sampled matrices per point, workers from MOCKMOD_WORKERS. */
MOCKMOD_API int mockmod_config_new(mockmod_config** out);
MOCKMOD_API void mockmod_config_free(mockmod_config* cfg);
/* rank, joyce, appell, theta, duke or all */
MOCKMOD_API int mockmod_config_set_suite(mockmod_config* cfg, const char* suite);
MOCKMOD_API int mockmod_config_set_seed(mockmod_config* cfg, uint64_t seed);
MOCKMOD_API int mockmod_config_set_trunc(mockmod_config* cfg, int trunc);
MOCKMOD_API int mockmod_config_set_jet_order(mockmod_config* cfg, int order);
/* tol > 0 replaces every non-adjudication tolerance of the floating checks */
MOCKMOD_API int mockmod_config_set_tol(mockmod_config* cfg, double tol);
/* f64 or dd */
MOCKMOD_API int mockmod_config_set_precision(mockmod_config* cfg, const char* precision);
MOCKMOD_API int mockmod_config_set_samples(mockmod_config* cfg, int n_tau, int n_gamma);
MOCKMOD_API int mockmod_config_set_workers(mockmod_config* cfg, int workers);
MOCKMOD_API int mockmod_config_add_ell(mockmod_config* cfg, int ell);
MOCKMOD_API int mockmod_config_add_k(mockmod_config* cfg, int k);
/* Restrict the run to a check group such as "rank.transform" or a suite prefix. */
MOCKMOD_API int mockmod_config_add_check(mockmod_config* cfg, const char* group);

/* Runs the configured suite. Configuration problems return MOCKMOD_E_CONFIG;
   failing checks are recorded in the result, not in the status. */
MOCKMOD_API int mockmod_run(const mockmod_config* cfg, mockmod_result** out);
MOCKMOD_API void mockmod_result_free(mockmod_result* res);
/* 0 when every non-adjudication check passed, 1 otherwise. */
MOCKMOD_API int mockmod_result_exit_code(const mockmod_result* res);
MOCKMOD_API size_t mockmod_result_count(const mockmod_result* res);
MOCKMOD_API size_t mockmod_result_failed(const mockmod_result* res);
/* Full report document; runtimes are written as 0 when timings == 0. */
MOCKMOD_API int mockmod_result_json(const mockmod_result* res, int timings, char** out);
MOCKMOD_API int mockmod_result_write(const mockmod_result* res, const char* path, int timings);

/* Check catalog as a JSON array of {check_id, suite, group, anchor, adjudication}. */
MOCKMOD_API int mockmod_catalog_json(char** out);

/* Exact q-expansion as QSeries JSON. object is one of
   eta, P, E2, rank-moment (param = l), joyce (param = k),
   theta (param = 0: theta1, 1: theta3, 2: vartheta_{-1}, 3: vartheta_0).
   Coefficients are valid for exponents below T. */
MOCKMOD_API int mockmod_expand(const char* object, int64_t T, int param, char** out);

/* Point evaluations. tau = tau_re + i tau_im with tau_im > 0.
   fn    args                 value
   E       x                  E(x) = erf(sqrt(pi) x)
   gammainc alpha, x          Gamma(alpha, x), alpha = +-1/2
   eta     -                  eta(tau)
   theta   z_re, z_im         vartheta(z; tau)
   E2      completed          E2(tau), or E2 - 3/(pi v) when completed != 0
   period  kind, k            kind 0: eta period integral, 1: eta(24 w) integral,
                              2: single-term integral for k
   rank    l                  completed r_{2l-1}(tau)
   joyce   k                  J-hat_k(tau) */
MOCKMOD_API int mockmod_eval(const char* fn, double tau_re, double tau_im, const double* args, int nargs,
                             double* out_re, double* out_im);

#ifdef __cplusplus
}
#endif

#endif
