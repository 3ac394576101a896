/* kksim C API: single-sideband KK receiver simulation with dither-beat
 * interference cancellation. All functions return kksim_status; string
 * outputs are heap-allocated and must be released with kksim_string_free.
 * Handles are opaque and freed with their matching *_free function.
 * Error details for the calling thread come from kksim_last_error(). */
#ifndef KKSIM_H
#define KKSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kksim_status {
    KKSIM_OK = 0,
    KKSIM_ERR_INVALID_ARGUMENT = 1, /* bad pointer / bad parameter */
    KKSIM_ERR_PARSE = 2,            /* malformed JSON */
    KKSIM_ERR_CONFIG = 3,           /* structurally valid but inconsistent config */
    KKSIM_ERR_RUNTIME = 4,          /* execution failure */
    KKSIM_ERR_IO = 5                /* file read/write failure */
} kksim_status;

typedef struct kksim_scenario kksim_scenario;
typedef struct kksim_sweep kksim_sweep;
typedef struct kksim_result kksim_result;
typedef struct kksim_sweep_result kksim_sweep_result;

const char* kksim_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* kksim_last_error(void);

void kksim_string_free(char* s);

/* ---- scenarios ---- */
kksim_status kksim_scenario_create(const char* json_text, kksim_scenario** out);
kksim_status kksim_scenario_create_default(kksim_scenario** out);
kksim_status kksim_scenario_from_file(const char* path, kksim_scenario** out);
/* Dotted-path override, e.g. ("dsbic.iterations", "3") or
 * ("tones.0.amplitude", "0.05"). Values parse as JSON, else as strings. */
kksim_status kksim_scenario_set(kksim_scenario* s, const char* dotted_key, const char* value);
kksim_status kksim_scenario_to_json(const kksim_scenario* s, char** out);
kksim_status kksim_scenario_hash(const kksim_scenario* s, char** out);
void kksim_scenario_free(kksim_scenario* s);

/* ---- single runs ---- */
/* threads = 0 picks the hardware concurrency. */
kksim_status kksim_run_scenario(const kksim_scenario* s, unsigned threads, kksim_result** out);
kksim_status kksim_result_summary_json(const kksim_result* r, char** out);
void kksim_result_free(kksim_result* r);

/* PSD at "tx_field", "rx_current" or "corrected_current", as CSV text. */
kksim_status kksim_run_psd(const kksim_scenario* s, const char* stage, unsigned threads,
                           char** csv_out);

/* ---- sweeps ---- */
kksim_status kksim_sweep_create(const char* json_text, kksim_sweep** out);
kksim_status kksim_sweep_from_file(const char* path, kksim_sweep** out);
kksim_status kksim_sweep_set(kksim_sweep* s, const char* dotted_key, const char* value);
kksim_status kksim_sweep_hash(const kksim_sweep* s, char** out);
void kksim_sweep_free(kksim_sweep* s);

kksim_status kksim_run_sweep(const kksim_sweep* s, unsigned workers, int keep_going,
                             kksim_sweep_result** out);
kksim_status kksim_sweep_result_curve_csv(const kksim_sweep_result* r, char** out);
kksim_status kksim_sweep_result_summary_json(const kksim_sweep_result* r, char** out);
void kksim_sweep_result_free(kksim_sweep_result* r);

#ifdef __cplusplus
}
#endif

#endif /* KKSIM_H */
