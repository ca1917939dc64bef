/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "splitgeom/splitgeom.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* k3_config =
    "{\"name\": \"capi\", \"scenario\": {\"kind\": \"twisted_torus\", \"dims\": [1, 1, 1],"
    " \"twist\": \"sin(x3) + 0.3*sin(x1 + x2)\"}, \"identities\": [\"main\", \"aux:2\", \"integral:main\"],"
    " \"grid\": [8], \"samples\": 10}";

int main(void) {
  EXPECT(strlen(sg_version()) > 0);

  double v = 0.0;
  const double p2[2] = {3.0, 2.0};
  EXPECT(sg_eval_expr("x1^2*x2", p2, 2, &v) == SG_OK && fabs(v - 18.0) < 1e-12);
  const double m1[1] = {-1.0};
  EXPECT(sg_eval_expr("log(x1)", m1, 1, &v) == SG_ERR_DOMAIN);
  EXPECT(strlen(sg_last_error()) > 0);
  EXPECT(sg_eval_expr("x1 +", m1, 1, &v) == SG_ERR_PARSE);

  char* text = NULL;
  EXPECT(sg_catalog_json(&text) == SG_OK && strstr(text, "twisted_torus_k2") != NULL);
  sg_string_free(text);

  sg_scenario* s = NULL;
  EXPECT(sg_scenario_from_json(k3_config, &s) == SG_OK);
  int dim = 0, k = 0, closed = 0;
  EXPECT(sg_scenario_info(s, &dim, &k, &closed) == SG_OK && dim == 3 && k == 3 && closed == 1);

  const double p3[3] = {0.3, 1.2, 2.9};
  double res = 1.0;
  EXPECT(sg_residual(s, "main", p3, 3, &res) == SG_OK && fabs(res) < 1e-10);
  EXPECT(sg_residual(s, "aux:2", p3, 3, &res) == SG_OK && fabs(res) < 1e-10);
  EXPECT(sg_residual(s, "aux:3", p3, 3, &res) == SG_ERR_ARGUMENT);
  EXPECT(strstr(sg_last_error(), "r out of range") != NULL);
  EXPECT(sg_residual(s, "main", p3, 2, &res) == SG_ERR_ARGUMENT);

  sg_report* r1 = NULL;
  sg_report* r2 = NULL;
  EXPECT(sg_verify(s, 1, &r1) == SG_OK);
  EXPECT(sg_verify(s, 2, &r2) == SG_OK);
  int pass = 0;
  EXPECT(sg_report_pass(r1, &pass) == SG_OK && pass == 1);

  char* a = NULL;
  char* b = NULL;
  const sg_report* one[1] = {r1};
  const sg_report* two[1] = {r2};
  EXPECT(sg_reports_json(one, 1, 0, &a) == SG_OK);
  EXPECT(sg_reports_json(two, 1, 0, &b) == SG_OK);
  EXPECT(a && b && strcmp(a, b) == 0);
  int identical = 0;
  char* diff = NULL;
  EXPECT(sg_report_diff(a, b, &identical, &diff) == SG_OK && identical == 1);
  sg_string_free(diff);
  sg_string_free(a);
  sg_string_free(b);

  char* csv = NULL;
  EXPECT(sg_report_csv(r1, &csv) == SG_OK && strncmp(csv, "x1,x2,x3", 8) == 0);
  sg_string_free(csv);
  sg_report_free(r1);
  sg_report_free(r2);
  sg_scenario_free(s);

  sg_scenario* bad = NULL;
  EXPECT(sg_scenario_from_json("{\"name\": \"x\", \"bogus\": 1}", &bad) == SG_ERR_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(sg_scenario_from_json("{not json", &bad) == SG_ERR_CONFIG);
  EXPECT(sg_scenario_from_file("/nonexistent/path.json", &bad) == SG_ERR_IO);
  EXPECT(sg_scenario_from_catalog("no_such_scenario", &bad) == SG_ERR_CONFIG);
  EXPECT(sg_scenario_from_json(NULL, &bad) == SG_ERR_ARGUMENT);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
