/* C interface to the depth-motion-map action recognition toolkit.
 *
 * All functions return a status code:
 *   HDMM_OK        success
 *   HDMM_E_USAGE   invalid arguments or options
 *   HDMM_E_DATA    malformed or missing input data
 *   HDMM_E_NUMERIC numeric failure (e.g. training divergence)
 * On failure, hdmm_last_error() returns a message for the calling thread.
 *
 * The bulk subcommand runners take their options as a JSON object (text);
 * the schema is documented in the project README.
 */
#ifndef HDMM_C_H
#define HDMM_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HDMM_OK 0
#define HDMM_E_USAGE 1
#define HDMM_E_DATA 2
#define HDMM_E_NUMERIC 3

typedef struct hdmm_sequence hdmm_sequence;

/* Message describing the most recent failure on this thread; empty string if
 * none. The pointer stays valid until the next failing call on the thread. */
const char* hdmm_last_error(void);

/* Depth sequence handles (binary .bin layout, see README). */
int hdmm_sequence_read(const char* path, hdmm_sequence** out);
int hdmm_sequence_write(const hdmm_sequence* seq, const char* path);
int hdmm_sequence_dims(const hdmm_sequence* seq, uint32_t* frames, uint32_t* width,
                       uint32_t* height);
/* Copies frame `index` (0-based) into `out`, which must hold width*height words. */
int hdmm_sequence_frame(const hdmm_sequence* seq, uint32_t index, uint32_t* out);
void hdmm_sequence_free(hdmm_sequence* seq);

/* Subcommand runners. `options_json` is a JSON object; outputs marked with
 * `out` are heap strings owned by the caller (release with hdmm_string_free). */
int hdmm_extract_run(const char* options_json);
int hdmm_train_run(const char* options_json);
int hdmm_eval_run(const char* options_json, char** report_json_out);
int hdmm_info_run(const char* path, char** info_json_out);
void hdmm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
