/* C API for the sterile-insect contact process toolkit.
 *
 * Usage pattern:
 *   sic_config* cfg = sic_config_new();
 *   sic_config_set(cfg, "model.lambda", "2.0");
 *   sic_result* res = NULL;
 *   int rc = sic_run("survival", cfg, "out_dir_or_NULL", &res);
 *   if (rc == SIC_OK) { ... sic_result_json(res) ... }
 *   else              { ... sic_last_error() ... }
 *   sic_result_free(res);
 *   sic_config_free(cfg);
 *
 * All functions returning int use the SIC_* status codes. On failure the
 * thread-local message from sic_last_error() describes the problem. Strings
 * returned by the API stay owned by the library: config/result strings live
 * until the owning object is freed, sic_last_error() and sic_version() live
 * until the next API call on the same thread.
 */
#ifndef SIC_H
#define SIC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SIC_OK 0           /* success */
#define SIC_ERR_DOMAIN 1   /* valid request, parameters outside the model's domain */
#define SIC_ERR_USAGE 2    /* malformed request: unknown key/command, bad value */
#define SIC_ERR_INTERNAL 3 /* unexpected failure (I/O, allocation, logic) */

typedef struct sic_config sic_config;
typedef struct sic_result sic_result;

/* ---- configuration ----------------------------------------------------- */

/* Never returns NULL except on allocation failure. */
sic_config* sic_config_new(void);
void sic_config_free(sic_config* cfg);

/* Sets one key (e.g. "model.lambda") to a string value. Unknown keys fail
 * with SIC_ERR_USAGE. */
int sic_config_set(sic_config* cfg, const char* key, const char* value);

/* Loads an INI-style file ([section] headers + key=value lines, '#'/';'
 * comments). Later values override earlier ones. */
int sic_config_load_file(sic_config* cfg, const char* path);

/* Applies environment overrides: SIC_MODEL__LAMBDA=2 sets model.lambda.
 * ("__" becomes ".", the rest is lowercased.) */
int sic_config_load_env(sic_config* cfg);

/* Canonical "key=value\n" serialization (sorted); owned by cfg. */
const char* sic_config_canonical(sic_config* cfg);

/* 16-hex-digit hash of the canonical serialization; owned by cfg. */
const char* sic_config_hash(sic_config* cfg);

/* ---- running ------------------------------------------------------------ */

/* Runs one command ("simulate", "survival", "pi", "sweep", ...). When
 * out_dir is non-NULL and non-empty, writes result.json, any data CSVs, and
 * manifest.json into that directory (created if needed). On success stores a
 * new result in *result (caller frees). On failure *result is NULL. */
int sic_run(const char* command, const sic_config* cfg, const char* out_dir,
            sic_result** result);

/* Space-separated list of available commands; static storage. */
const char* sic_commands(void);

/* ---- results ------------------------------------------------------------ */

void sic_result_free(sic_result* res);

/* Full result as a JSON document; owned by res. */
const char* sic_result_json(const sic_result* res);

size_t sic_result_estimate_count(const sic_result* res);
/* i must be < sic_result_estimate_count(); name owned by res. */
const char* sic_result_estimate_name(const sic_result* res, size_t i);
double sic_result_estimate_value(const sic_result* res, size_t i);
double sic_result_estimate_stderr(const sic_result* res, size_t i);
double sic_result_estimate_ci_lo(const sic_result* res, size_t i);
double sic_result_estimate_ci_hi(const sic_result* res, size_t i);
int64_t sic_result_estimate_reps(const sic_result* res, size_t i);

/* ---- diagnostics --------------------------------------------------------- */

/* Message from the last failing call on this thread ("" if none). */
const char* sic_last_error(void);

/* Library version string, e.g. "0.1.0". */
const char* sic_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SIC_H */
