#ifndef PDECRL_H
#define PDECRL_H

/* C interface to the PDE control library. All entry points return an error
 * code; pdecrl_last_error() describes the most recent failure on the calling
 * thread. Handles are opaque and must be released with the matching free. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    PDECRL_OK = 0,
    PDECRL_ERROR = 1,
    PDECRL_GEOMETRY_MISMATCH = 2,
    PDECRL_BAD_ARGUMENT = 3
};

typedef struct pdecrl_config pdecrl_config;

const char* pdecrl_version(void);

/* Message of the last failed call on this thread; empty string otherwise. */
const char* pdecrl_last_error(void);

/* Load a config file, or resolve a named preset. NULL on error. */
pdecrl_config* pdecrl_config_load(const char* path_or_preset);

/* Override one value, e.g. ("training.seed", "7"). Re-validates. */
int pdecrl_config_override(pdecrl_config* cfg, const char* dotted_key, const char* value);

/* Write the fully resolved config text into buf (truncated to len). Returns
 * the untruncated length, or a negative error code. */
long pdecrl_config_echo(const pdecrl_config* cfg, char* buf, size_t len);

void pdecrl_config_free(pdecrl_config* cfg);

/* Jobs: each writes a manifest plus its artifacts under out_dir. */
int pdecrl_train(const pdecrl_config* cfg, const char* out_dir, int global_agent);
int pdecrl_eval(const pdecrl_config* cfg, const char* policy_path, const char* out_dir);
int pdecrl_transfer(const pdecrl_config* cfg, const char* policy_path, const char* out_dir);

/* kind: "opposition" or "global". */
int pdecrl_baseline(const pdecrl_config* cfg, const char* kind, const char* out_dir);

/* Run the deterministic property suite. The report text goes into buf when
 * given. PDECRL_OK only if every check passes. */
int pdecrl_check(char* buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* PDECRL_H */
