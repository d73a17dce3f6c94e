/* C interface to the wire-off decision engine.
 *
 * Every call returns a wo_status. On failure the message is available from
 * wo_last_error() on the same thread until the next call. Strings handed out
 * through char** parameters are owned by the caller and released with
 * wo_string_free(). Handles are opaque and released with their _free call.
 */
#ifndef WIREOFF_WIREOFF_H
#define WIREOFF_WIREOFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WO_API __declspec(dllexport)
#else
#define WO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wo_status {
    WO_OK = 0,
    WO_ERR_DOMAIN = 1,
    WO_ERR_ALIGNMENT = 2,
    WO_ERR_FIT = 3,
    WO_ERR_TUNE = 4,
    WO_ERR_VALIDATION = 5,
    WO_ERR_ESTIMATION = 6,
    WO_ERR_SIMULATION = 7,
    WO_ERR_PARSE = 8,
    WO_ERR_GAP = 9,
    WO_ERR_IO = 10,
    WO_ERR_NOT_FOUND = 11,
    WO_ERR_CONFLICT = 12,
    WO_ERR_INVALID_ARGUMENT = 13, /* null handle or pointer */
    WO_ERR_INTERNAL = 14
} wo_status;

/* Statuses caused by the caller's inputs rather than by the engine. */
WO_API int wo_status_is_input_error(wo_status status);
WO_API const char* wo_status_name(wo_status status);
WO_API const char* wo_last_error(void);
WO_API const char* wo_version(void);
WO_API void wo_string_free(char* s);

/* "error", "warn", "info" or "debug". */
WO_API wo_status wo_set_log_level(const char* level);

typedef enum wo_input_kind {
    WO_INPUT_VOLUMES = 0,
    WO_INPUT_AVAILABILITY = 1,
    WO_INPUT_EVENTS = 2,
    WO_INPUT_WIREOFF_HISTORY = 3
} wo_input_kind;

typedef struct wo_inputs wo_inputs;

WO_API wo_status wo_inputs_create(wo_inputs** out);
WO_API void wo_inputs_free(wo_inputs* inputs);
WO_API wo_status wo_inputs_load_file(wo_inputs* inputs, wo_input_kind kind, const char* path);
WO_API wo_status wo_inputs_load_text(wo_inputs* inputs, wo_input_kind kind, const char* text, size_t length);
WO_API int wo_inputs_has(const wo_inputs* inputs, wo_input_kind kind);

typedef enum wo_command {
    WO_CMD_FIT_BASELINE = 0,
    WO_CMD_FORECAST_AVAILABILITY = 1,
    WO_CMD_ESTIMATE_BEHAVIOR = 2,
    WO_CMD_SIMULATE_WIREDON = 3,
    WO_CMD_FIT_WIREDOFF = 4,
    WO_CMD_DIAGNOSE = 5,
    WO_CMD_RECOMMEND = 6
} wo_command;

/* Runs one batch stage. `config_json` is a JSON object of run settings
 * (seed, threads, horizon, replications, trials, ...) or NULL for defaults.
 * When `output_dir` is not NULL the artifacts are written there atomically.
 * `result_json` receives the stage's JSON document. */
WO_API wo_status wo_run(wo_command command, const wo_inputs* inputs, const char* config_json, const char* output_dir,
                        char** result_json);

/* One-line human summary of a recommendation document from WO_CMD_RECOMMEND. */
WO_API wo_status wo_recommendation_summary(const char* recommendation_json, char** line);

/* Generates a synthetic incident from a scenario file. `seed` overrides the
 * scenario's own seed when `has_seed` is nonzero. */
WO_API wo_status wo_synth(const char* scenario_path, uint64_t seed, int has_seed, const char* output_dir,
                          char** result_json);

typedef struct wo_server wo_server;

/* `state_dir` may be NULL for in-memory sessions only. Port 0 picks a free port. */
WO_API wo_status wo_server_create(const char* host, int port, const char* state_dir, int threads, wo_server** out);
WO_API wo_status wo_server_bind(wo_server* server, int* bound_port);
/* Blocks until wo_server_stop is called from another thread. */
WO_API wo_status wo_server_run(wo_server* server);
WO_API void wo_server_stop(wo_server* server);
WO_API void wo_server_free(wo_server* server);

/* Dispatches a request in-process without the network. `query` is a URL
 * query string without the leading '?', or NULL. */
WO_API wo_status wo_server_request(wo_server* server, const char* method, const char* path, const char* query,
                                   const char* body, int* http_status, char** response_body);

#ifdef __cplusplus
}
#endif

#endif
