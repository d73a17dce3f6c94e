#include "wireoff/wireoff.h"

#include "wireoff/commands.hpp"
#include "wireoff/config.hpp"
#include "wireoff/errors.hpp"
#include "wireoff/log.hpp"
#include "wireoff/service.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct wo_inputs {
    wireoff::LoadedInputs data;
};

struct wo_server {
    std::unique_ptr<wireoff::Service> service;
    std::unique_ptr<wireoff::HttpServer> http;
};

namespace {

thread_local std::string g_last_error;

wo_status status_of(wireoff::ErrorKind kind) {
    using wireoff::ErrorKind;
    switch (kind) {
        case ErrorKind::Domain: return WO_ERR_DOMAIN;
        case ErrorKind::Alignment: return WO_ERR_ALIGNMENT;
        case ErrorKind::Fit: return WO_ERR_FIT;
        case ErrorKind::Tune: return WO_ERR_TUNE;
        case ErrorKind::Validation: return WO_ERR_VALIDATION;
        case ErrorKind::Estimation: return WO_ERR_ESTIMATION;
        case ErrorKind::Simulation: return WO_ERR_SIMULATION;
        case ErrorKind::Parse: return WO_ERR_PARSE;
        case ErrorKind::Gap: return WO_ERR_GAP;
        case ErrorKind::Io: return WO_ERR_IO;
        case ErrorKind::NotFound: return WO_ERR_NOT_FOUND;
        case ErrorKind::Conflict: return WO_ERR_CONFLICT;
    }
    return WO_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

/// Runs `fn`, translating exceptions into a status and the thread's last error.
template <class F>
wo_status guarded(F&& fn) noexcept {
    try {
        g_last_error.clear();
        fn();
        return WO_OK;
    } catch (const wireoff::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return WO_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WO_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return WO_ERR_INTERNAL;
    }
}

wo_status invalid(const char* what) noexcept {
    g_last_error = what;
    return WO_ERR_INVALID_ARGUMENT;
}

void load(wireoff::LoadedInputs& in, wo_input_kind kind, const std::string& text) {
    switch (kind) {
        case WO_INPUT_VOLUMES: in.volumes = wireoff::parse_volumes(text); return;
        case WO_INPUT_AVAILABILITY: in.availability = wireoff::parse_availability(text); return;
        case WO_INPUT_EVENTS: in.events = wireoff::parse_events(text); return;
        case WO_INPUT_WIREOFF_HISTORY: in.wireoff_history = wireoff::parse_wireoff_history(text); return;
    }
    throw wireoff::ValidationError("unknown input kind " + std::to_string(static_cast<int>(kind)));
}

}  // namespace

extern "C" {

int wo_status_is_input_error(wo_status status) {
    switch (status) {
        case WO_ERR_DOMAIN:
        case WO_ERR_ALIGNMENT:
        case WO_ERR_VALIDATION:
        case WO_ERR_PARSE:
        case WO_ERR_GAP:
        case WO_ERR_IO:
        case WO_ERR_NOT_FOUND:
        case WO_ERR_CONFLICT:
        case WO_ERR_INVALID_ARGUMENT: return 1;
        default: return 0;
    }
}

const char* wo_status_name(wo_status status) {
    switch (status) {
        case WO_OK: return "ok";
        case WO_ERR_DOMAIN: return "domain";
        case WO_ERR_ALIGNMENT: return "alignment";
        case WO_ERR_FIT: return "fit";
        case WO_ERR_TUNE: return "tune";
        case WO_ERR_VALIDATION: return "validation";
        case WO_ERR_ESTIMATION: return "estimation";
        case WO_ERR_SIMULATION: return "simulation";
        case WO_ERR_PARSE: return "parse";
        case WO_ERR_GAP: return "gap";
        case WO_ERR_IO: return "io";
        case WO_ERR_NOT_FOUND: return "not_found";
        case WO_ERR_CONFLICT: return "conflict";
        case WO_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case WO_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* wo_last_error(void) { return g_last_error.c_str(); }

const char* wo_version(void) { return "1.0.0"; }

void wo_string_free(char* s) { std::free(s); }

wo_status wo_set_log_level(const char* level) {
    if (!level) return invalid("level is null");
    return guarded([&] {
        if (!wireoff::log::set_level(level)) {
            throw wireoff::ValidationError(std::string("unknown log level '") + level +
                                           "' (expected error, warn, info or debug)");
        }
    });
}

wo_status wo_inputs_create(wo_inputs** out) {
    if (!out) return invalid("out is null");
    return guarded([&] { *out = new wo_inputs{}; });
}

void wo_inputs_free(wo_inputs* inputs) { delete inputs; }

wo_status wo_inputs_load_file(wo_inputs* inputs, wo_input_kind kind, const char* path) {
    if (!inputs || !path) return invalid("inputs or path is null");
    return guarded([&] {
        const std::string text = wireoff::read_file(path);
        try {
            load(inputs->data, kind, text);
        } catch (const wireoff::ParseError& e) {
            throw wireoff::ParseError(std::string(path) + ": " + e.what(), e.line());
        }
    });
}

wo_status wo_inputs_load_text(wo_inputs* inputs, wo_input_kind kind, const char* text, size_t length) {
    if (!inputs || (!text && length > 0)) return invalid("inputs or text is null");
    return guarded([&] { load(inputs->data, kind, std::string(text ? text : "", length)); });
}

int wo_inputs_has(const wo_inputs* inputs, wo_input_kind kind) {
    if (!inputs) return 0;
    switch (kind) {
        case WO_INPUT_VOLUMES: return inputs->data.volumes.has_value();
        case WO_INPUT_AVAILABILITY: return inputs->data.availability.has_value();
        case WO_INPUT_EVENTS: return inputs->data.events.has_value();
        case WO_INPUT_WIREOFF_HISTORY: return inputs->data.wireoff_history.has_value();
    }
    return 0;
}

wo_status wo_run(wo_command command, const wo_inputs* inputs, const char* config_json, const char* output_dir,
                 char** result_json) {
    if (!inputs || !result_json) return invalid("inputs or result_json is null");
    return guarded([&] {
        const wireoff::RunConfig cfg = wireoff::parse_run_config(std::string_view(config_json ? config_json : ""));
        wireoff::Artifacts a;
        switch (command) {
            case WO_CMD_FIT_BASELINE: a = wireoff::run_fit_baseline(inputs->data, cfg); break;
            case WO_CMD_FORECAST_AVAILABILITY: a = wireoff::run_forecast_availability(inputs->data, cfg); break;
            case WO_CMD_ESTIMATE_BEHAVIOR: a = wireoff::run_estimate_behavior(inputs->data, cfg); break;
            case WO_CMD_SIMULATE_WIREDON: a = wireoff::run_simulate_wiredon(inputs->data, cfg); break;
            case WO_CMD_FIT_WIREDOFF: a = wireoff::run_fit_wiredoff(inputs->data, cfg); break;
            case WO_CMD_DIAGNOSE: a = wireoff::run_diagnose(inputs->data, cfg); break;
            case WO_CMD_RECOMMEND: a = wireoff::run_recommend(inputs->data, cfg); break;
            default: throw wireoff::ValidationError("unknown command " + std::to_string(static_cast<int>(command)));
        }
        if (output_dir) wireoff::write_artifacts(a, output_dir);
        *result_json = dup_string(wireoff::render_json(a.result));
    });
}

wo_status wo_recommendation_summary(const char* recommendation_json, char** line) {
    if (!recommendation_json || !line) return invalid("recommendation_json or line is null");
    return guarded([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(recommendation_json);
        } catch (const nlohmann::json::exception& e) {
            throw wireoff::ParseError(std::string("recommendation: ") + e.what(), 0);
        }
        if (!j.contains("summary") || !j["summary"].is_string()) {
            throw wireoff::ValidationError("recommendation document has no summary");
        }
        *line = dup_string(j["summary"].get<std::string>());
    });
}

wo_status wo_synth(const char* scenario_path, uint64_t seed, int has_seed, const char* output_dir,
                   char** result_json) {
    if (!scenario_path || !result_json) return invalid("scenario_path or result_json is null");
    return guarded([&] {
        const wireoff::Scenario scenario = wireoff::load_scenario(scenario_path);
        const wireoff::Artifacts a =
            wireoff::run_synth(scenario, has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
        if (output_dir) wireoff::write_artifacts(a, output_dir);
        *result_json = dup_string(wireoff::render_json(a.result));
    });
}

wo_status wo_server_create(const char* host, int port, const char* state_dir, int threads, wo_server** out) {
    if (!out) return invalid("out is null");
    if (port < 0 || port > 65535) return invalid("port must lie in [0, 65535]");
    if (threads < 1) return invalid("threads must be >= 1");
    return guarded([&] {
        wireoff::ServiceOptions options;
        if (state_dir) options.state_dir = state_dir;
        options.default_threads = threads;
        auto server = std::make_unique<wo_server>();
        server->service = std::make_unique<wireoff::Service>(options);
        server->http = std::make_unique<wireoff::HttpServer>(*server->service, host ? host : "127.0.0.1", port);
        *out = server.release();
    });
}

wo_status wo_server_bind(wo_server* server, int* bound_port) {
    if (!server) return invalid("server is null");
    return guarded([&] {
        const int port = server->http->bind();
        if (bound_port) *bound_port = port;
    });
}

wo_status wo_server_run(wo_server* server) {
    if (!server) return invalid("server is null");
    return guarded([&] { server->http->listen(); });
}

void wo_server_stop(wo_server* server) {
    if (server) server->http->stop();
}

void wo_server_free(wo_server* server) { delete server; }

wo_status wo_server_request(wo_server* server, const char* method, const char* path, const char* query,
                            const char* body, int* http_status, char** response_body) {
    if (!server || !method || !path || !http_status || !response_body) {
        return invalid("server, method, path, http_status and response_body are required");
    }
    return guarded([&] {
        wireoff::HttpRequest req;
        req.method = method;
        req.path = path;
        if (query) req.query = wireoff::parse_query(query);
        if (body) req.body = body;
        const wireoff::HttpResponse res = server->service->handle(req);
        *http_status = res.status;
        *response_body = dup_string(res.body);
    });
}

}  // extern "C"
