/* C interface to the splitgeom engine. All strings are UTF-8 JSON or plain
 * text; strings returned through `char**` are owned by the caller and must
 * be released with sg_string_free. Functions return SG_OK or an error code;
 * sg_last_error() describes the most recent failure on the calling thread. */
#ifndef SPLITGEOM_H
#define SPLITGEOM_H

#include <stddef.h>

#if defined(SPLITGEOM_BUILDING_LIBRARY)
#define SG_API __attribute__((visibility("default")))
#else
#define SG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_CONFIG = 1,   /* schema violation, unknown key, r out of range */
  SG_ERR_PARSE = 2,    /* malformed expression */
  SG_ERR_DOMAIN = 3,   /* primitive evaluated outside its domain */
  SG_ERR_GEOMETRY = 4, /* non-SPD metric, rank loss, curvature gap violated */
  SG_ERR_ARGUMENT = 5, /* invalid argument */
  SG_ERR_IO = 6,       /* file could not be read */
  SG_ERR_INTERNAL = 7
} sg_status;

typedef struct sg_scenario sg_scenario;
typedef struct sg_report sg_report;

SG_API const char* sg_last_error(void);
SG_API const char* sg_version(void);
SG_API void sg_string_free(char* s);

/* Catalog listing as a JSON array of {name, kind, dim, k, dims, closed, ...}. */
SG_API sg_status sg_catalog_json(char** out);
/* Config JSON of a built-in scenario. */
SG_API sg_status sg_catalog_config(const char* name, char** out);

SG_API sg_status sg_scenario_from_json(const char* config_json, sg_scenario** out);
SG_API sg_status sg_scenario_from_file(const char* path, sg_scenario** out);
SG_API sg_status sg_scenario_from_catalog(const char* name, sg_scenario** out);
SG_API void sg_scenario_free(sg_scenario* s);
/* Any output pointer may be NULL. */
SG_API sg_status sg_scenario_info(const sg_scenario* s, int* dim, int* k, int* closed);
SG_API sg_status sg_scenario_config(const sg_scenario* s, char** out);

/* Pointwise residual LHS - RHS of an identity ("main", "walczak", "aux:2",
 * "companion", "companion_k3", "smix_lemma", ...) at `point`. */
SG_API sg_status sg_residual(const sg_scenario* s, const char* identity, const double* point, size_t dim,
                             double* residual);

/* Runs every configured check. threads = 0 uses the config/env default. */
SG_API sg_status sg_verify(const sg_scenario* s, int threads, sg_report** out);
SG_API void sg_report_free(sg_report* r);
SG_API sg_status sg_report_pass(const sg_report* r, int* pass);
/* Combined JSON report of `count` runs; timing = 0 omits the timing block. */
SG_API sg_status sg_reports_json(const sg_report* const* reports, size_t count, int timing, char** out);
SG_API sg_status sg_report_csv(const sg_report* r, char** out);
/* Human-readable failure messages, one per line (empty if all pass). */
SG_API sg_status sg_report_failures(const sg_report* r, char** out);

/* Differences between two report JSON documents, ignoring timing; one per
 * line. *identical is set to 1 when there are none. */
SG_API sg_status sg_report_diff(const char* a_json, const char* b_json, int* identical, char** out);

/* Evaluates an expression in x1..x_dim at `point`. */
SG_API sg_status sg_eval_expr(const char* source, const double* point, size_t dim, double* value);

#ifdef __cplusplus
}
#endif

#endif /* SPLITGEOM_H */
