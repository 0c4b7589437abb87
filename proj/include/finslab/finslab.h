/* C interface to finslab. All functions return a finslab_status; on failure
 * finslab_last_error() describes the problem (per thread). Strings handed out
 * by the library are released with finslab_string_free. */
#ifndef FINSLAB_FINSLAB_H
#define FINSLAB_FINSLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(FINSLAB_BUILDING_LIBRARY)
#define FINSLAB_API __attribute__((visibility("default")))
#else
#define FINSLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum finslab_status {
  FINSLAB_OK = 0,
  FINSLAB_ERR_INVALID_ARGUMENT = 1,
  FINSLAB_ERR_PARSE = 2,
  FINSLAB_ERR_HYPOTHESIS = 3,
  FINSLAB_ERR_DOMAIN = 4,
  FINSLAB_ERR_NOT_FOUND = 5,
  FINSLAB_ERR_NUMERIC = 6,
  FINSLAB_ERR_INTERNAL = 7
} finslab_status;

typedef struct finslab_model finslab_model;
typedef struct finslab_curve finslab_curve;
typedef struct finslab_report finslab_report;

/* Numeric options shared by the verbs. Fields left at their defaults select
 * the verb's own defaults (tol <= 0, lambda <= 0). */
typedef struct finslab_options {
  double tol;
  double lambda;
  int samples;
  double t0;
  double t1;
  uint64_t seed;
  int trials;
} finslab_options;

FINSLAB_API const char* finslab_version(void);
FINSLAB_API const char* finslab_last_error(void);
FINSLAB_API const char* finslab_status_name(finslab_status status);
FINSLAB_API void finslab_string_free(char* s);
FINSLAB_API void finslab_options_default(finslab_options* options);
FINSLAB_API uint64_t finslab_default_seed(void);

/* JSON array of catalog entry names. */
FINSLAB_API finslab_status finslab_catalog_names(char** out_json);

FINSLAB_API finslab_status finslab_model_from_catalog(const char* name, finslab_model** out);
/* metric: "riemannian", "randers" or "cubic" built from the entry's invariant vector. */
FINSLAB_API finslab_status finslab_model_from_catalog_metric(const char* name, const char* metric,
                                                             finslab_model** out);
/* base_dir resolves a relative algebra path; may be NULL. */
FINSLAB_API finslab_status finslab_model_from_json(const char* text, const char* base_dir,
                                                   finslab_model** out);
FINSLAB_API finslab_status finslab_model_load(const char* path, finslab_model** out);
FINSLAB_API finslab_status finslab_model_to_json(const finslab_model* model, char** out_json);
FINSLAB_API finslab_status finslab_algebra_to_json(const finslab_model* model, char** out_json);
FINSLAB_API int finslab_model_dim(const finslab_model* model);
FINSLAB_API void finslab_model_free(finslab_model* model);

/* Parses "e1 - 0.5*z2", "1,0,0" or "[1,0,0]" against the model's basis labels.
 * out must hold finslab_model_dim(model) doubles. */
FINSLAB_API finslab_status finslab_model_parse_vector(const finslab_model* model, const char* text,
                                                      double* out);

FINSLAB_API finslab_status finslab_norm_value(const finslab_model* model, const double* y, size_t n,
                                              double* out);
FINSLAB_API finslab_status finslab_geodesic_vector_residual(const finslab_model* model,
                                                            const double* y, size_t n, double* out);

/* factors is row-major, k rows of length n. */
FINSLAB_API finslab_status finslab_curve_from_factors(const double* factors, size_t k, size_t n,
                                                      finslab_curve** out);
FINSLAB_API finslab_status finslab_curve_from_json(const char* text, finslab_curve** out);
FINSLAB_API finslab_status finslab_curve_load(const char* path, finslab_curve** out);
FINSLAB_API finslab_status finslab_body_velocity(const finslab_model* model,
                                                 const finslab_curve* curve, double t, double* out);
FINSLAB_API void finslab_curve_free(finslab_curve* curve);

/* Verbs. Each produces a report; vectors are length finslab_model_dim(model).
 * X and y may be NULL. */
FINSLAB_API finslab_status finslab_run_check(const finslab_model* model, const finslab_options* o,
                                             finslab_report** out);
FINSLAB_API finslab_status finslab_run_berwald(const finslab_model* model, const double* X,
                                               const finslab_options* o, finslab_report** out);
FINSLAB_API finslab_status finslab_run_natred(const finslab_model* model, const finslab_options* o,
                                              finslab_report** out);
FINSLAB_API finslab_status finslab_run_geovec(const finslab_model* model, const double* y,
                                              const finslab_options* o, finslab_report** out);
/* The deformed model is returned through out_model when it is not NULL. */
FINSLAB_API finslab_status finslab_run_deform(const finslab_model* model, const finslab_options* o,
                                              finslab_model** out_model, finslab_report** out);
FINSLAB_API finslab_status finslab_run_two_step(const finslab_model* model, const double* v0,
                                                const finslab_options* o, finslab_report** out);
FINSLAB_API finslab_status finslab_run_verify_curve(const finslab_model* model,
                                                    const finslab_curve* curve,
                                                    const finslab_options* o, finslab_report** out);
FINSLAB_API finslab_status finslab_run_navigation(const finslab_model* model, const double* W0,
                                                  const double* v0, const finslab_options* o,
                                                  finslab_report** out);
FINSLAB_API finslab_status finslab_run_go_scan(const finslab_model* model, const finslab_options* o,
                                               finslab_report** out);

/* 1 if every verdict passed, 0 otherwise. */
FINSLAB_API int finslab_report_passed(const finslab_report* report);
/* indent < 0 gives compact output. */
FINSLAB_API finslab_status finslab_report_json(const finslab_report* report, int indent,
                                               char** out_json);
/* Reads a top-level number from the report, e.g. "max_residual". */
FINSLAB_API finslab_status finslab_report_number(const finslab_report* report, const char* key,
                                                 double* out);
FINSLAB_API void finslab_report_free(finslab_report* report);

#ifdef __cplusplus
}
#endif

#endif
