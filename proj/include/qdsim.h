/* Public C interface to the qubit-bath simulator.
 *
 * Usage pattern:
 *   qdsim_config* cfg = qdsim_config_load("rabi.toml");
 *   if (!cfg) { use qdsim_last_error(); }
 *   qdsim_config_set_seed(cfg, 7);
 *   qdsim_result* res = qdsim_run(cfg);
 *   int code = qdsim_result_exit_code(res);   0 ok, 2 bad input, 3 fit failed
 *   ...
 *   qdsim_result_free(res);
 *   qdsim_config_free(cfg);
 *
 * All functions are thread-compatible but not thread-safe on the same handle.
 * The error string returned by qdsim_last_error() is thread-local and valid
 * until the next failing call on the same thread.
 */

#ifndef QDSIM_H
#define QDSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QDSIM_API __declspec(dllexport)
#else
#define QDSIM_API __attribute__((visibility("default")))
#endif

typedef struct qdsim_config qdsim_config;
typedef struct qdsim_result qdsim_result;

/* Library version string, e.g. "1.0.0". Static storage, never freed. */
QDSIM_API const char* qdsim_version(void);

/* Message from the most recent failing call on this thread, or "" if none. */
QDSIM_API const char* qdsim_last_error(void);

/* Parse a config file. Returns NULL on error (see qdsim_last_error). */
QDSIM_API qdsim_config* qdsim_config_load(const char* path);

/* Parse config text directly, without touching the filesystem. */
QDSIM_API qdsim_config* qdsim_config_load_text(const char* text);

QDSIM_API void qdsim_config_free(qdsim_config* cfg);

/* Command-line style overrides, applied after parsing. */
QDSIM_API void qdsim_config_set_seed(qdsim_config* cfg, uint64_t seed);
QDSIM_API int qdsim_config_set_threads(qdsim_config* cfg, int threads);
QDSIM_API void qdsim_config_set_out_dir(qdsim_config* cfg, const char* dir);

/* Name of the configured experiment ("rabi", "ramsey", ...). Owned by cfg. */
QDSIM_API const char* qdsim_config_experiment(const qdsim_config* cfg);

/* Run the configured experiment. Returns NULL only on invalid arguments or an
 * internal failure; fit non-convergence still yields a result (exit code 3). */
QDSIM_API qdsim_result* qdsim_run(const qdsim_config* cfg);

QDSIM_API void qdsim_result_free(qdsim_result* res);

/* 0 success, 3 a declared fit failed to converge. */
QDSIM_API int qdsim_result_exit_code(const qdsim_result* res);

/* Human-readable summary of key fitted quantities. Owned by res. */
QDSIM_API const char* qdsim_result_summary(const qdsim_result* res);

/* Paths of the files written, in write order. Owned by res. */
QDSIM_API size_t qdsim_result_file_count(const qdsim_result* res);
QDSIM_API const char* qdsim_result_file(const qdsim_result* res, size_t index);

#ifdef __cplusplus
}
#endif

#endif
