#ifndef MBSPEC_MBSPEC_H
#define MBSPEC_MBSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MBSPEC_BUILDING_LIBRARY)
#    define MBSPEC_API __declspec(dllexport)
#  else
#    define MBSPEC_API __declspec(dllimport)
#  endif
#else
#  define MBSPEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes of the command line tool. */
typedef enum mbspec_status {
  MBSPEC_OK = 0,
  MBSPEC_ERR_USAGE = 1,
  MBSPEC_ERR_VALIDATION = 2,
  MBSPEC_ERR_SOLVER = 3,
  MBSPEC_ERR_IO = 4
} mbspec_status;

/* A loaded model. Handles are not safe for concurrent use; distinct handles are. */
typedef struct mbspec_model mbspec_model;

typedef struct mbspec_run_options {
  const char* out_dir;     /* NULL means "." */
  const char* format;      /* "json", "csv" or NULL for the config value */
  int has_seed;
  uint64_t seed;
  int has_workers;
  size_t workers;
  const char* lambda_grid; /* "a:b:step" or NULL */
  int timings;             /* nonzero adds wall-clock timings to report.json */
} mbspec_run_options;

MBSPEC_API const char* mbspec_version(void);

/* JSON object {"error": kind, "category": ..., "message": ...} describing the
 * last failure on this thread, or "" after a success. */
MBSPEC_API const char* mbspec_last_error(void);

MBSPEC_API mbspec_status mbspec_model_load(const char* path, mbspec_model** out);
/* Relative CSV references resolve against base_dir (NULL means "."). */
MBSPEC_API mbspec_status mbspec_model_load_string(const char* config_json, const char* base_dir,
                                                  mbspec_model** out);
MBSPEC_API void mbspec_model_free(mbspec_model* model);

/* 16 hex digits plus the terminator; buf needs at least 17 bytes. */
MBSPEC_API mbspec_status mbspec_model_hash(const mbspec_model* model, char* buf, size_t len);
MBSPEC_API mbspec_status mbspec_model_dimension(const mbspec_model* model, size_t* out);

/* HVZ bottom. contains_trivial receives 1 when the vacuum sector is present. */
MBSPEC_API mbspec_status mbspec_hvz_tau(mbspec_model* model, double* tau, int* contains_trivial);

/* Array outputs: *count always receives the full size; at most cap values are copied. */
MBSPEC_API mbspec_status mbspec_eigenvalues(mbspec_model* model, double* out, size_t cap, size_t* count);
MBSPEC_API mbspec_status mbspec_thresholds(mbspec_model* model, double* out, size_t cap, size_t* count);

/* rho_hat at each lambda; +inf below the threshold set. */
MBSPEC_API mbspec_status mbspec_rho_hat(mbspec_model* model, const double* lambdas, size_t n, double* out);

MBSPEC_API void mbspec_run_options_init(mbspec_run_options* opts);
/* command: validate | spectrum | hvz | thresholds | rho | probe | report */
MBSPEC_API mbspec_status mbspec_run(mbspec_model* model, const char* command, const mbspec_run_options* opts);

#ifdef __cplusplus
}
#endif

#endif
