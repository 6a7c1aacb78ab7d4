/*
 * C interface to the stationary-sequence estimation library. All objects are
 * opaque handles created and destroyed through this interface; every entry
 * point returns a status code and leaves a human-readable message retrievable
 * via rstat_last_error() on failure. Status codes match the CLI exit codes.
 */

#ifndef RSTAT_H
#define RSTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RSTAT_API __declspec(dllexport)
#else
#define RSTAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rstat_status {
    RSTAT_OK = 0,
    RSTAT_ERR_INVALID = 2, /* malformed input or schema violation */
    RSTAT_ERR_NUMERIC = 3, /* non-convergence, conditioning, minimality */
    RSTAT_ERR_CLASS = 4    /* admissibility class empty or inapplicable */
} rstat_status;

typedef struct rstat_density rstat_density;
typedef struct rstat_coeffs rstat_coeffs;
typedef struct rstat_result rstat_result;

RSTAT_API const char* rstat_version(void);

/* Message of the most recent failure on this thread. */
RSTAT_API const char* rstat_last_error(void);

/* --- densities ---------------------------------------------------------- */

/* {"type":"rational","ma":[[re,im],...],"ar":[[re,im],...]} or
   {"type":"grid","values":[...]} */
RSTAT_API rstat_status rstat_density_parse(const char* json, rstat_density** out);
RSTAT_API void rstat_density_free(rstat_density* d);

/* Samples f(lambda_m) on the uniform grid lambda_m = -pi + 2*pi*m/size;
   out_values must hold grid_size doubles. */
RSTAT_API rstat_status rstat_density_eval(const rstat_density* d, uint32_t grid_size,
                                          double* out_values);

/* --- functionals --------------------------------------------------------- */

/* {"coeffs":[[re,im],...]} or
   {"rule":{"type":"geometric","scale":[re,im],"ratio":[re,im]},"truncation":n} */
RSTAT_API rstat_status rstat_coeffs_parse(const char* json, uint32_t truncation_hint,
                                          rstat_coeffs** out);
RSTAT_API void rstat_coeffs_free(rstat_coeffs* c);

/* --- operations ---------------------------------------------------------- */

RSTAT_API rstat_status rstat_factorize(const rstat_density* d, uint32_t grid_size,
                                       uint32_t truncation, rstat_result** out);

/* g may be NULL for noiseless observations. */
RSTAT_API rstat_status rstat_predict(const rstat_density* f, const rstat_density* g,
                                     const rstat_coeffs* a, uint32_t grid_size,
                                     uint32_t truncation, rstat_result** out);

RSTAT_API rstat_status rstat_interpolate(const rstat_density* f, const rstat_density* g,
                                         const rstat_coeffs* a, uint32_t grid_size,
                                         uint32_t truncation, rstat_result** out);

RSTAT_API rstat_status rstat_game(const rstat_coeffs* a, double power, uint32_t order,
                                  rstat_result** out);

/* Request objects for the structured operations; see the library README for
   the field-by-field schema.
   minimax:      {"problem":"extrapolation"|"interpolation", "noisy":bool,
                  "coeffs":{...}, "f_class":{...}, "g_class":{...},
                  "grid":M, "trunc":L, "seed":S, "probes":n, "threads":t}
   simulate:     {"density":{...}, "noise":{...}|absent, "coeffs":{...},
                  "plan":{...}, "n":..., "reps":..., "seed":..., "burn_in":...,
                  "estimator_truncation":..., "threads":...}
   verify-saddle:{"solution":{...}, "coeffs":{...}, "f_class":{...},
                  "g_class":{...}|absent, "probes":n, "seed":S,
                  "amplitude":a, "grid":M, "threads":t} */
RSTAT_API rstat_status rstat_minimax(const char* request_json, rstat_result** out);
RSTAT_API rstat_status rstat_simulate(const char* request_json, rstat_result** out);
RSTAT_API rstat_status rstat_verify_saddle(const char* request_json, rstat_result** out);

/* --- results ------------------------------------------------------------- */

/* Canonical JSON rendering of the result; owned by the handle. */
RSTAT_API const char* rstat_result_json(const rstat_result* r);

/* Numeric field lookup by dotted path, e.g. "delta" or "residuals.saddle_hi". */
RSTAT_API rstat_status rstat_result_number(const rstat_result* r, const char* key,
                                           double* out);

RSTAT_API size_t rstat_result_warning_count(const rstat_result* r);
RSTAT_API const char* rstat_result_warning(const rstat_result* r, size_t index);

RSTAT_API void rstat_result_free(rstat_result* r);

#ifdef __cplusplus
}
#endif

#endif /* RSTAT_H */
