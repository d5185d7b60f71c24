/* C API of the hierarchical local-relaxation Poisson solver.
 *
 * All entry points are exported from the hlrsolver shared library. Objects
 * are opaque handles; every fallible call returns an hlr_status and, where
 * a buffer is supplied, a NUL-terminated diagnostic message.
 */
#ifndef HLR_H
#define HLR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hlr_status {
  HLR_OK = 0,
  HLR_ERROR = 1,
  HLR_MAX_PASSES = 2 /* solve finished but the pass budget ran out */
} hlr_status;

/* ---- configuration ---- */

/* Flat dotted-key configuration, the same keys the config file uses. */
typedef struct hlr_config hlr_config;

hlr_config* hlr_config_create(void);
void hlr_config_destroy(hlr_config* cfg);

/* Merge "key = value" lines from a file; existing keys are overwritten. */
hlr_status hlr_config_load_file(hlr_config* cfg, const char* path,
                                char* errbuf, size_t errlen);
hlr_status hlr_config_set(hlr_config* cfg, const char* key, const char* value,
                          char* errbuf, size_t errlen);

/* ---- workflows ---- */

/* Run one of: "solve", "study", "profile", "timeseries", "oracle-check".
 * Outputs are written to the configured `out` directory. */
hlr_status hlr_run_command(const hlr_config* cfg, const char* command,
                           char* errbuf, size_t errlen);

/* ---- in-memory solve ---- */

typedef struct hlr_solution hlr_solution;

/* Solve the configured problem and hand back the field + report. */
hlr_status hlr_solve(const hlr_config* cfg, hlr_solution** out, char* errbuf,
                     size_t errlen);
void hlr_solution_destroy(hlr_solution* sol);

/* Grid dimension (2 or 3) and entries per staggered component array. */
int hlr_solution_dim(const hlr_solution* sol);
size_t hlr_solution_component_size(const hlr_solution* sol);

/* Copy component `axis` (0..dim-1) into out[0..n). n must be at least
 * hlr_solution_component_size. Layout is x-fastest row major, entry (i,j,k)
 * holding the component at the midpoint displaced +1/2 along `axis`. */
hlr_status hlr_solution_get_component(const hlr_solution* sol, int axis,
                                      double* out, size_t n);

/* JSON report string (same schema as report.json); valid until the
 * solution is destroyed. */
const char* hlr_solution_report_json(const hlr_solution* sol);

#ifdef __cplusplus
}
#endif

#endif /* HLR_H */
