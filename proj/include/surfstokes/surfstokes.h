/* C interface of the surfstokes library.
 *
 * All functions return SS_OK (0) or a positive ss_status code. The message
 * of the last failure on the calling thread is available from
 * ss_last_error(). Handles are opaque; every *_create or result-producing
 * call must be paired with the matching *_destroy.
 */
#ifndef SURFSTOKES_SURFSTOKES_H
#define SURFSTOKES_SURFSTOKES_H

#include <stddef.h>

#if defined(SURFSTOKES_BUILDING_SHARED)
#define SS_API __attribute__((visibility("default")))
#else
#define SS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
    SS_OK = 0,
    SS_E_CONFIG = 1,
    SS_E_NONCONVERGENCE = 2,
    SS_E_DEGENERATE_GRADIENT = 3,
    SS_E_DEGENERATE_ELEMENT = 4,
    SS_E_SINGULAR_MATRIX = 5,
    SS_E_TOO_LARGE = 6,
    SS_E_DOMAIN = 7,
    SS_E_IO = 8,
    SS_E_INTERNAL = 9,
    SS_E_ARGUMENT = 10
} ss_status;

typedef struct ss_config ss_config;
typedef struct ss_table ss_table;

/* Receives one progress line (no trailing newline). */
typedef void (*ss_log_fn)(const char* line, void* user);

SS_API const char* ss_version(void);
/* "E_CONFIG" etc.; "OK" for SS_OK. */
SS_API const char* ss_status_name(int status);
/* Empty string when the last call on this thread succeeded. */
SS_API const char* ss_last_error(void);

SS_API int ss_config_create(ss_config** out);
SS_API void ss_config_destroy(ss_config* config);
/* Keys: surface, method, ku, kpr, klambda, kg, kp, mu, eta_exp, levels
 * ("a..b"), quad, lambda_exact, threads, out, allow_unstable. */
SS_API int ss_config_set(ss_config* config, const char* key, const char* value);
/* key=value lines, '#' starts a comment. */
SS_API int ss_config_load_file(ss_config* config, const char* path);
SS_API int ss_config_set_log(ss_config* config, ss_log_fn fn, void* user);

/* Convergence sweep, one row per level. */
SS_API int ss_run(const ss_config* config, ss_table** out);
/* Geometric probes, one row per level. */
SS_API int ss_probe_geometry(const ss_config* config, ss_table** out);
/* Inf-sup estimates, one row per level. */
SS_API int ss_infsup(const ss_config* config, ss_table** out);
/* Solution of the finest configured level as legacy VTK. */
SS_API int ss_export_vtk(const ss_config* config, const char* path);
/* Saddle matrix of the finest configured level as MatrixMarket; the
 * right-hand side goes next to it with an _rhs suffix. */
SS_API int ss_export_matrix(const ss_config* config, const char* path);

SS_API void ss_table_destroy(ss_table* table);
SS_API int ss_table_rows(const ss_table* table);
SS_API int ss_table_cols(const ss_table* table);
/* NULL when out of range. */
SS_API const char* ss_table_column(const ss_table* table, int col);
/* NaN when out of range. */
SS_API double ss_table_value(const ss_table* table, int row, int col);
/* Full CSV text, including the EOC or summary blocks; "" for NULL. */
SS_API const char* ss_table_csv(const ss_table* table);
SS_API int ss_table_write_csv(const ss_table* table, const char* path);
/* Named scalar, e.g. "eoc_e_ut_l2", "slope_geo_d", "ratio". */
SS_API int ss_table_summary(const ss_table* table, const char* key, double* value);
/* Summary keys in sorted order; NULL when out of range. */
SS_API const char* ss_table_summary_key(const ss_table* table, int index);

#ifdef __cplusplus
}
#endif

#endif /* SURFSTOKES_SURFSTOKES_H */
