/* Exercises the shared library through its C header only. */
#include "finslab/finslab.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                     \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

#define EXPECT_OK(call)                                                                 \
  do {                                                                                  \
    finslab_status st_ = (call);                                                        \
    if (st_ != FINSLAB_OK) {                                                            \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call,               \
              finslab_status_name(st_), finslab_last_error());                          \
      ++failures;                                                                       \
    }                                                                                   \
  } while (0)

static void test_catalog(void) {
  char* names = NULL;
  EXPECT_OK(finslab_catalog_names(&names));
  EXPECT(names && strstr(names, "su2_plus_r2") != NULL);
  finslab_string_free(names);

  finslab_model* m = NULL;
  EXPECT(finslab_model_from_catalog("sl2", &m) == FINSLAB_ERR_NOT_FOUND);
  EXPECT(m == NULL);
  EXPECT(strstr(finslab_last_error(), "sl2") != NULL);
  EXPECT(strcmp(finslab_status_name(FINSLAB_ERR_HYPOTHESIS), "hypothesis") == 0);
  EXPECT(finslab_model_from_catalog(NULL, &m) == FINSLAB_ERR_INVALID_ARGUMENT);
  EXPECT(finslab_default_seed() == 20241016u);
  EXPECT(strlen(finslab_version()) > 0);
}

static void test_check_and_berwald(void) {
  finslab_options o;
  finslab_options_default(&o);
  finslab_model* m = NULL;
  EXPECT_OK(finslab_model_from_catalog("su2_plus_r2", &m));
  EXPECT(finslab_model_dim(m) == 5);

  finslab_report* r = NULL;
  EXPECT_OK(finslab_run_check(m, &o, &r));
  EXPECT(finslab_report_passed(r) == 1);
  finslab_report_free(r);

  EXPECT_OK(finslab_run_berwald(m, NULL, &o, &r));
  EXPECT(finslab_report_passed(r) == 1);
  double skew = -1.0;
  EXPECT_OK(finslab_report_number(r, "residual_skew", &skew));
  EXPECT(skew <= 1e-12);
  EXPECT(finslab_report_number(r, "no_such_key", &skew) == FINSLAB_ERR_NOT_FOUND);
  finslab_report_free(r);
  finslab_model_free(m);

  /* su2 with X = e3 under the identity gram fails the orthogonality condition. */
  EXPECT_OK(finslab_model_from_catalog("su2", &m));
  double X[3];
  EXPECT_OK(finslab_model_parse_vector(m, "e3", X));
  EXPECT(X[0] == 0.0 && X[1] == 0.0 && X[2] == 1.0);
  EXPECT(finslab_model_parse_vector(m, "e9", X) == FINSLAB_ERR_PARSE);
  EXPECT_OK(finslab_run_berwald(m, X, &o, &r));
  EXPECT(finslab_report_passed(r) == 0);
  double orth = 0.0;
  EXPECT_OK(finslab_report_number(r, "residual_orth", &orth));
  EXPECT(orth >= 0.5);
  finslab_report_free(r);
  finslab_model_free(m);
}

static void test_deform_two_step(void) {
  finslab_options o;
  finslab_options_default(&o);
  o.lambda = 2.0;
  finslab_model *m = NULL, *d = NULL;
  finslab_report* r = NULL;
  EXPECT_OK(finslab_model_from_catalog("su2_plus_r2", &m));
  EXPECT_OK(finslab_run_deform(m, &o, &d, &r));
  EXPECT(finslab_report_passed(r) == 1);
  finslab_report_free(r);

  /* The deformed model survives a JSON round trip. */
  char* text = NULL;
  EXPECT_OK(finslab_model_to_json(d, &text));
  finslab_model* back = NULL;
  EXPECT_OK(finslab_model_from_json(text, NULL, &back));
  finslab_string_free(text);

  double v0[5];
  EXPECT_OK(finslab_model_parse_vector(back, "0.3*e1 - 0.2*e3 + 0.4*z1", v0));
  finslab_options_default(&o);
  EXPECT_OK(finslab_run_two_step(back, v0, &o, &r));
  EXPECT(finslab_report_passed(r) == 1);
  char* json = NULL;
  EXPECT_OK(finslab_report_json(r, -1, &json));
  EXPECT(json && strstr(json, "\"verb\":\"two-step\"") != NULL);
  finslab_string_free(json);
  finslab_report_free(r);

  /* Curve built from factors by hand: a one-parameter subgroup on the bi-invariant base. */
  const double factors[5] = {0.1, 0.2, 0.3, 0.0, 0.0};
  finslab_curve* c = NULL;
  EXPECT_OK(finslab_curve_from_factors(factors, 1, 5, &c));
  double v[5];
  EXPECT_OK(finslab_body_velocity(m, c, 0.4, v));
  EXPECT(fabs(v[2] - 0.3) <= 1e-15);
  finslab_options_default(&o);
  EXPECT_OK(finslab_run_verify_curve(m, c, &o, &r));
  finslab_report_free(r);
  finslab_curve_free(c);

  EXPECT(finslab_curve_from_json("{\"factors\": [[1, 2], [3]]}", &c) != FINSLAB_OK);
  EXPECT(finslab_curve_from_json("{not json", &c) == FINSLAB_ERR_PARSE);

  finslab_model_free(back);
  finslab_model_free(d);
  finslab_model_free(m);
}

static void test_errors(void) {
  finslab_options o;
  finslab_options_default(&o);
  finslab_model* m = NULL;
  finslab_report* r = NULL;
  EXPECT_OK(finslab_model_from_catalog("su2_plus_r2", &m));
  /* Non-central wind is refused. */
  double W0[5] = {1, 0, 0, 0, 0}, v0[5] = {1, 0, 0, 0, 0};
  EXPECT(finslab_run_navigation(m, W0, v0, &o, &r) == FINSLAB_ERR_HYPOTHESIS);
  EXPECT(r == NULL);
  double y[5] = {0, 0, 0, 0, 0}, out = 0.0;
  EXPECT(finslab_norm_value(m, y, 5, &out) == FINSLAB_ERR_DOMAIN);
  EXPECT(finslab_norm_value(m, y, 3, &out) == FINSLAB_ERR_INVALID_ARGUMENT);
  y[3] = 1.0;
  EXPECT_OK(finslab_norm_value(m, y, 5, &out));
  EXPECT(out > 0.0);
  finslab_model_free(m);

  EXPECT(finslab_model_from_json("{\"algebra\": 3}", NULL, &m) != FINSLAB_OK);
  EXPECT(finslab_model_load("/nonexistent/model.json", &m) != FINSLAB_OK);
  finslab_model_free(NULL);
  finslab_report_free(NULL);
  finslab_curve_free(NULL);
  finslab_string_free(NULL);
}

static void test_go_scan(void) {
  finslab_options o;
  finslab_options_default(&o);
  o.lambda = 2.0;
  o.trials = 3;
  o.seed = 7;
  finslab_model* m = NULL;
  finslab_report *a = NULL, *b = NULL;
  EXPECT_OK(finslab_model_from_catalog("su2_plus_r2", &m));
  EXPECT_OK(finslab_run_go_scan(m, &o, &a));
  EXPECT_OK(finslab_run_go_scan(m, &o, &b));
  EXPECT(finslab_report_passed(a) == 1);
  char *ja = NULL, *jb = NULL;
  EXPECT_OK(finslab_report_json(a, 2, &ja));
  EXPECT_OK(finslab_report_json(b, 2, &jb));
  EXPECT(ja && jb && strcmp(ja, jb) == 0);
  finslab_string_free(ja);
  finslab_string_free(jb);
  finslab_report_free(a);
  finslab_report_free(b);
  finslab_model_free(m);
}

int main(void) {
  test_catalog();
  test_check_and_berwald();
  test_deform_two_step();
  test_errors();
  test_go_scan();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
