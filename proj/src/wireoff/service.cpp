#include "wireoff/service.hpp"

#include "wireoff/commands.hpp"
#include "wireoff/config.hpp"
#include "wireoff/errors.hpp"
#include "wireoff/log.hpp"
#include "wireoff/pipeline.hpp"
#include "wireoff/random.hpp"
#include "wireoff/serialize.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <set>
#include <sstream>
#include <vector>

namespace wireoff {

using nlohmann::json;

namespace {

struct FitState {
    int version = 0;
    std::uint64_t seed = 0;
    json request;
    RunConfig config;
    FittedModels models;
};

struct SimState {
    int version = 0;
    int fit_version = 0;
    json request;
    RunConfig config;
    BaselineForecasts baselines;
    WiredOnForecast forecast;
    std::optional<std::vector<double>> wiredoff;
    std::optional<Recommendation> recommendation;
};

}  // namespace

struct Session {
    std::string id;
    std::string created_at;
    json source;  // CSV texts as ingested, for snapshots
    PipelineInputs inputs;
    Incident incident;

    std::mutex write_mutex;  // serializes fits and simulations
    mutable std::shared_mutex state_mutex;
    std::shared_ptr<const FitState> fit;
    std::shared_ptr<const SimState> sim;
    int fit_versions = 0;
    int sim_versions = 0;

    std::shared_ptr<const FitState> current_fit() const {
        std::shared_lock lock(state_mutex);
        return fit;
    }
    std::shared_ptr<const SimState> current_sim() const {
        std::shared_lock lock(state_mutex);
        return sim;
    }
};

namespace {

constexpr const char* kInputKinds[] = {"volumes", "availability", "events", "wireoff_history"};

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, const std::string& code, const std::string& message,
                            const std::map<std::string, std::string>& fields = {}) {
    json body{{"error", code}, {"message", message}};
    if (!fields.empty()) body["fields"] = fields;
    return json_response(status, body);
}

int status_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Conflict: return 409;
        case ErrorKind::NotFound: return 404;
        case ErrorKind::Fit:
        case ErrorKind::Tune:
        case ErrorKind::Estimation:
        case ErrorKind::Simulation: return 422;
        default: return 400;
    }
}

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '/') {
            if (!cur.empty()) parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    try {
        json j = json::parse(body);
        if (!j.is_object()) throw FieldError(FieldMap{{"body", "must be a JSON object"}});
        return j;
    } catch (const json::exception& e) {
        throw FieldError(FieldMap{{"body", std::string("malformed JSON: ") + e.what()}});
    }
}

/// Rejects keys outside `allowed` before the shared config parser sees them.
RunConfig parse_restricted(const json& body, const std::set<std::string>& allowed) {
    std::map<std::string, std::string> errors;
    for (const auto& [key, value] : body.items()) {
        if (!allowed.contains(key)) errors[key] = "not accepted by this endpoint";
    }
    if (!errors.empty()) throw FieldError(std::move(errors));
    return parse_run_config(body);
}

const std::set<std::string> kFitFields{"seed",          "trials",           "des_trials",        "des_window",
                                       "holdout_minutes", "harmonics",      "period",            "changepoint_count",
                                       "changepoint_range", "seasonality_prior", "changepoint_prior", "noise_scale",
                                       "smoothing",     "max_retry_gap_seconds", "hc_intercept",   "max_lag"};
const std::set<std::string> kSimulateFields{"seed",   "horizon", "replications", "threads",
                                            "warmup", "stochastic_rounding", "sample_changepoints"};

std::int64_t query_int(const HttpRequest& req, const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) {
    auto it = req.query.find(key);
    if (it == req.query.end()) return fallback;
    std::int64_t v = 0;
    std::size_t pos = 0;
    try {
        v = std::stoll(it->second, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != it->second.size()) throw FieldError(FieldMap{{key, "must be an integer"}});
    if (v < lo || v > hi) {
        throw FieldError(FieldMap{{key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"}});
    }
    return v;
}

bool query_bool(const HttpRequest& req, const std::string& key) {
    auto it = req.query.find(key);
    if (it == req.query.end()) return false;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw FieldError(FieldMap{{key, "must be true or false"}});
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Parses the ingested texts into pipeline inputs, collecting per-field errors.
void ingest(Session& s, const json& source) {
    std::map<std::string, std::string> errors;
    for (const char* kind : kInputKinds) {
        const std::string key = std::string(kind) + "_csv";
        if (!source.contains(key)) continue;
        const std::string& text = source.at(key).get_ref<const std::string&>();
        try {
            const std::string k = kind;
            if (k == "volumes") {
                s.inputs.volumes = parse_volumes(text);
            } else if (k == "availability") {
                s.inputs.availability = parse_availability(text);
            } else if (k == "events") {
                s.inputs.events = parse_events(text);
            } else {
                s.inputs.wireoff_history = parse_wireoff_history(text);
            }
        } catch (const Error& e) {
            errors[key] = e.what();
        }
    }
    if (!errors.empty()) throw FieldError(std::move(errors));
    s.inputs.problematic_vendor = source.value("problematic_vendor", std::string());
    try {
        s.incident = resolve_incident(s.inputs.availability, s.inputs.problematic_vendor);
        if (!s.inputs.volumes.vendors.contains(s.incident.problematic_vendor)) {
            throw ValidationError("no volume rows for vendor '" + s.incident.problematic_vendor + "'");
        }
        volumes_at(s.inputs.volumes, s.incident.t0_epoch_minute);
    } catch (const ValidationError& e) {
        throw FieldError(FieldMap{{"problematic_vendor", e.what()}});
    }
}

/// Reads `<kind>_csv` or `<kind>_path` from a create request into CSV texts.
json collect_sources(const json& body) {
    std::map<std::string, std::string> errors;
    json source = json::object();
    std::set<std::string> known{"problematic_vendor"};
    for (const char* kind : kInputKinds) {
        const std::string csv_key = std::string(kind) + "_csv";
        const std::string path_key = std::string(kind) + "_path";
        known.insert(csv_key);
        known.insert(path_key);
        const bool has_csv = body.contains(csv_key);
        const bool has_path = body.contains(path_key);
        const bool required = std::string(kind) != "wireoff_history";
        if (has_csv && has_path) {
            errors[csv_key] = "give either " + csv_key + " or " + path_key + ", not both";
        } else if (has_csv) {
            if (!body[csv_key].is_string()) {
                errors[csv_key] = "must be a string";
            } else {
                source[csv_key] = body[csv_key];
            }
        } else if (has_path) {
            if (!body[path_key].is_string()) {
                errors[path_key] = "must be a string";
            } else {
                try {
                    source[csv_key] = read_file(body[path_key].get<std::string>());
                } catch (const Error& e) {
                    errors[path_key] = e.what();
                }
            }
        } else if (required) {
            errors[csv_key] = "required (or " + path_key + ")";
        }
    }
    if (body.contains("problematic_vendor")) {
        if (!body["problematic_vendor"].is_string()) {
            errors["problematic_vendor"] = "must be a string";
        } else {
            source["problematic_vendor"] = body["problematic_vendor"];
        }
    }
    for (const auto& [key, value] : body.items()) {
        if (!known.contains(key)) errors[key] = "unknown field";
    }
    if (!errors.empty()) throw FieldError(std::move(errors));
    return source;
}

std::shared_ptr<FitState> run_fit(const Session& s, const json& request, int version) {
    RunConfig cfg = parse_restricted(request, kFitFields);
    if (!cfg.seed_given) throw FieldError(FieldMap{{"seed", "required: the service never picks a seed"}});
    auto state = std::make_shared<FitState>();
    state->version = version;
    state->seed = cfg.seed;
    state->request = request;
    state->config = cfg;
    FitConfig fit = cfg.fit;
    fit.seed = SeedPlan::from(cfg.seed).fit;
    state->models = fit_models(s.inputs, fit);
    return state;
}

std::shared_ptr<SimState> run_simulation(const FitState& fit, const json& request, int version, int default_threads) {
    RunConfig cfg = parse_restricted(request, kSimulateFields);
    if (!cfg.seed_given) throw FieldError(FieldMap{{"seed", "required: the service never picks a seed"}});
    if (!request.contains("threads")) cfg.threads = default_threads;
    auto state = std::make_shared<SimState>();
    state->version = version;
    state->fit_version = fit.version;
    state->request = request;
    state->config = cfg;
    SimulationConfig sim = cfg.sim;
    sim.seed = SeedPlan::from(cfg.seed).simulation;
    sim.threads = cfg.threads;
    state->baselines = forecast_baselines(fit.models, sim.horizon, sim.warmup_start,
                                          SeedPlan::from(fit.seed).changepoints, sim.sample_changepoints);
    state->forecast = simulate(fit.models, state->baselines, sim);
    if (fit.models.wiredoff) {
        state->wiredoff = wiredoff_curve(fit.models, state->baselines);
        state->recommendation = recommend(state->forecast.w_on_mean, *state->wiredoff, fit.models.t0_epoch_minute);
    }
    return state;
}

json curve_json(const std::string& kind, std::int64_t horizon, std::int64_t anchor, int fit_version,
                const std::vector<double>& values) {
    std::vector<std::int64_t> offsets(static_cast<std::size_t>(horizon));
    std::vector<std::int64_t> epochs(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        offsets[i] = static_cast<std::int64_t>(i) + 1;
        epochs[i] = anchor + offsets[i];
    }
    return {{"kind", kind},       {"horizon", horizon}, {"anchor_epoch_minute", anchor}, {"fit_version", fit_version},
            {"offset_m", offsets}, {"epoch_minute", epochs}, {"values", values}};
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {
    if (options_.state_dir) {
        std::filesystem::create_directories(*options_.state_dir);
        restore();
    }
}

Service::~Service() = default;

std::size_t Service::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
    return it->second;
}

std::string Service::next_id(const std::string& body) {
    // Caller holds the unique lock on sessions_mutex_.
    for (;;) {
        std::string id = "s" + hex64(derive_seed(fnv1a(body), {++counter_}));
        if (!sessions_.contains(id)) return id;
    }
}

void Service::persist(const Session& s) const {
    if (!options_.state_dir) return;
    const auto fit = s.current_fit();
    const auto sim = s.current_sim();
    json snap{{"session_id", s.id},
              {"created_at", s.created_at},
              {"source", s.source},
              {"fit_versions", s.fit_versions},
              {"sim_versions", s.sim_versions},
              {"fit", fit ? json{{"version", fit->version}, {"request", fit->request}} : json(nullptr)},
              {"simulation", sim ? json{{"version", sim->version}, {"request", sim->request}} : json(nullptr)}};
    write_file_atomic(*options_.state_dir / (s.id + ".json"), render_json(snap));
}

void Service::restore() {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.state_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        try {
            const json snap = json::parse(read_file(path));
            auto s = std::make_shared<Session>();
            s->id = snap.at("session_id").get<std::string>();
            s->created_at = snap.at("created_at").get<std::string>();
            s->source = snap.at("source");
            ingest(*s, s->source);
            s->fit_versions = snap.value("fit_versions", 0);
            s->sim_versions = snap.value("sim_versions", 0);
            if (!snap.at("fit").is_null()) {
                s->fit = run_fit(*s, snap["fit"].at("request"), snap["fit"].at("version").get<int>());
                if (!snap.at("simulation").is_null()) {
                    s->sim = run_simulation(*s->fit, snap["simulation"].at("request"),
                                            snap["simulation"].at("version").get<int>(), options_.default_threads);
                }
            }
            std::unique_lock lock(sessions_mutex_);
            sessions_[s->id] = s;
            ++counter_;
            log::info("restored session {} from {}", s->id, path.string());
        } catch (const std::exception& e) {
            log::warn("skipping snapshot {}: {}", path.string(), e.what());
        }
    }
}

HttpResponse Service::handle(const HttpRequest& req) {
    try {
        const auto parts = split_path(req.path);
        if (parts.empty() || parts[0] != "v1") return error_response(404, "not_found", "no route for " + req.path);
        auto method_not_allowed = [&] {
            return error_response(405, "method_not_allowed", req.method + " not supported on " + req.path);
        };
        if (parts.size() == 2 && parts[1] == "openapi.json") {
            if (req.method != "GET") return method_not_allowed();
            return {200, openapi_document(), "application/json"};
        }
        if (parts.size() == 2 && parts[1] == "health") {
            if (req.method != "GET") return method_not_allowed();
            return json_response(200, {{"status", "ok"}, {"sessions", session_count()}});
        }
        if (parts.size() < 2 || parts[1] != "sessions" || parts.size() > 4) {
            return error_response(404, "not_found", "no route for " + req.path);
        }
        if (parts.size() == 2) {
            if (req.method != "POST") return method_not_allowed();
            return create_session(req);
        }
        const std::string& id = parts[2];
        if (parts.size() == 3) {
            if (req.method == "DELETE") return delete_session(id);
            if (req.method != "GET") return method_not_allowed();
            return get_session(*find(id));
        }
        const std::string& action = parts[3];
        static const std::map<std::string, std::string> kMethods{
            {"fit", "POST"},      {"forecast", "GET"}, {"simulate", "POST"},   {"recommendation", "GET"},
            {"whatif", "POST"},   {"diagnostics", "GET"}};
        auto route = kMethods.find(action);
        if (route == kMethods.end()) return error_response(404, "not_found", "no route for " + req.path);
        const auto session = find(id);
        if (req.method != route->second) return method_not_allowed();
        if (action == "fit") return fit(*session, req);
        if (action == "forecast") return forecast(*session, req);
        if (action == "simulate") return simulate(*session, req);
        if (action == "recommendation") return recommendation(*session);
        if (action == "whatif") return whatif(*session, req);
        return diagnostics(*session);
    } catch (const FieldError& e) {
        return error_response(400, "validation", e.what(), e.fields());
    } catch (const Error& e) {
        return error_response(status_for(e.kind()), to_string(e.kind()), e.what());
    } catch (const std::exception& e) {
        log::error("internal error on {} {}: {}", req.method, req.path, e.what());
        return error_response(500, "internal", e.what());
    }
}

HttpResponse Service::create_session(const HttpRequest& req) {
    const json body = parse_body(req.body);
    auto s = std::make_shared<Session>();
    s->source = collect_sources(body);
    ingest(*s, s->source);
    s->created_at = now_utc();
    {
        std::unique_lock lock(sessions_mutex_);
        s->id = next_id(req.body);
        sessions_[s->id] = s;
    }
    persist(*s);
    json vendors = json::array();
    for (const auto& [vendor, vs] : s->inputs.volumes.vendors) vendors.push_back(vendor);
    return json_response(201, {{"session_id", s->id},
                               {"created_at", s->created_at},
                               {"problematic_vendor", s->incident.problematic_vendor},
                               {"t0_epoch_minute", s->incident.t0_epoch_minute},
                               {"vendors", vendors},
                               {"has_wireoff_history", s->inputs.wireoff_history.has_value()}});
}

HttpResponse Service::get_session(const Session& s) const {
    const auto fit = s.current_fit();
    const auto sim = s.current_sim();
    json vendors = json::array();
    for (const auto& [vendor, vs] : s.inputs.volumes.vendors) vendors.push_back(vendor);
    return json_response(200, {{"session_id", s.id},
                               {"created_at", s.created_at},
                               {"problematic_vendor", s.incident.problematic_vendor},
                               {"t0_epoch_minute", s.incident.t0_epoch_minute},
                               {"vendors", vendors},
                               {"has_wireoff_history", s.inputs.wireoff_history.has_value()},
                               {"fit_version", fit ? json(fit->version) : json(nullptr)},
                               {"simulation_version", sim ? json(sim->version) : json(nullptr)}});
}

HttpResponse Service::delete_session(const std::string& id) {
    {
        std::unique_lock lock(sessions_mutex_);
        if (sessions_.erase(id) == 0) throw NotFoundError("unknown session '" + id + "'");
    }
    if (options_.state_dir) std::filesystem::remove(*options_.state_dir / (id + ".json"));
    return {204, "", "application/json"};
}

HttpResponse Service::fit(Session& s, const HttpRequest& req) {
    const json body = parse_body(req.body);
    std::lock_guard write(s.write_mutex);
    auto state = run_fit(s, body, s.fit_versions + 1);
    {
        std::unique_lock lock(s.state_mutex);
        s.fit_versions = state->version;
        s.fit = state;
        s.sim.reset();  // curves from an older fit no longer apply
    }
    persist(s);
    json summary = summarize(state->models);
    return json_response(200, {{"session_id", s.id},
                               {"fit_version", state->version},
                               {"seed", state->seed},
                               {"delta", state->models.wiredoff ? json(state->models.wiredoff->delta) : json(nullptr)},
                               {"models", std::move(summary)}});
}

HttpResponse Service::forecast(const Session& s, const HttpRequest& req) const {
    auto it = req.query.find("kind");
    if (it == req.query.end()) throw FieldError(FieldMap{{"kind", "required: baseline, availability or wiredoff"}});
    const std::string kind = it->second;
    if (kind != "baseline" && kind != "availability" && kind != "wiredoff") {
        throw FieldError(FieldMap{{"kind", "must be baseline, availability or wiredoff"}});
    }
    const std::int64_t R = query_int(req, "horizon", 60, 1, 100000);
    const bool sample = query_bool(req, "sample_changepoints");
    const auto fit = s.current_fit();
    if (!fit) throw ConflictError("fit has not run for this session");
    const auto& models = fit->models;
    const std::int64_t anchor = models.t0_epoch_minute;

    if (kind == "availability") {
        json j = curve_json(kind, R, anchor, fit->version, availability_curve(models, R));
        j["model"] = models.des.model;
        return json_response(200, j);
    }
    if (kind == "wiredoff" && !models.wiredoff) throw ConflictError("no wire-off history in this session");
    const BaselineForecasts b =
        forecast_baselines(models, R, -10, SeedPlan::from(fit->seed).changepoints, sample);
    if (kind == "wiredoff") {
        json j = curve_json(kind, R, anchor, fit->version, wiredoff_curve(models, b));
        j["delta"] = models.wiredoff->delta;
        return json_response(200, j);
    }
    json j = curve_json(kind, R, anchor, fit->version, b.problematic);
    j["problematic_vendor"] = models.problematic_vendor;
    j["other"] = b.other;
    j["vendors"] = b.per_vendor;
    j["sample_changepoints"] = sample;
    return json_response(200, j);
}

HttpResponse Service::simulate(Session& s, const HttpRequest& req) {
    const json body = parse_body(req.body);
    std::lock_guard write(s.write_mutex);
    const auto fit = s.current_fit();
    if (!fit) throw ConflictError("fit has not run for this session");
    auto state = run_simulation(*fit, body, s.sim_versions + 1, options_.default_threads);
    {
        std::unique_lock lock(s.state_mutex);
        s.sim_versions = state->version;
        s.sim = state;
    }
    persist(s);
    json j = state->forecast;
    j["session_id"] = s.id;
    j["simulation_version"] = state->version;
    j["fit_version"] = state->fit_version;
    j["anchor_epoch_minute"] = fit->models.t0_epoch_minute;
    return json_response(200, j);
}

HttpResponse Service::recommendation(const Session& s) const {
    const auto fit = s.current_fit();
    if (!fit) throw ConflictError("fit has not run for this session");
    const auto sim = s.current_sim();
    if (!sim) throw ConflictError("simulate has not run since the latest fit");
    if (!sim->recommendation) throw ConflictError("no wire-off history in this session");
    json j = recommendation_json(*sim->recommendation, fit->models.problematic_vendor, fit->models.wiredoff->delta);
    j["fit_version"] = fit->version;
    j["simulation_version"] = sim->version;
    return json_response(200, j);
}

HttpResponse Service::whatif(const Session& s, const HttpRequest& req) const {
    const json body = parse_body(req.body);
    std::map<std::string, std::string> errors;
    for (const auto& [key, value] : body.items()) {
        if (key != "wireoff_m") errors[key] = "unknown field";
    }
    if (!body.contains("wireoff_m")) {
        errors["wireoff_m"] = "required";
    } else if (!body["wireoff_m"].is_number_integer()) {
        errors["wireoff_m"] = "must be an integer";
    }
    if (!errors.empty()) throw FieldError(std::move(errors));
    const auto fit = s.current_fit();
    if (!fit) throw ConflictError("fit has not run for this session");
    const auto sim = s.current_sim();
    if (!sim) throw ConflictError("simulate has not run since the latest fit");
    if (!sim->wiredoff) throw ConflictError("no wire-off history in this session");
    const auto m = body["wireoff_m"].get<std::int64_t>();
    const std::int64_t R = sim->forecast.horizon;
    if (m < 1 || m > R) throw FieldError(FieldMap{{"wireoff_m", "must lie in [1, " + std::to_string(R) + "]"}});
    json j = wireoff::whatif(sim->forecast.w_on_mean, *sim->wiredoff, m);
    j["horizon"] = R;
    j["simulation_version"] = sim->version;
    return json_response(200, j);
}

HttpResponse Service::diagnostics(const Session& s) const {
    const auto fit = s.current_fit();
    if (!fit) throw ConflictError("fit has not run for this session");
    const auto& models = fit->models;
    if (!models.wiredoff) throw ConflictError("no wire-off history in this session");
    if (!models.wiredoff->diagnostics) throw ConflictError("wire-off history too short for residual diagnostics");
    json j = *models.wiredoff->diagnostics;
    j["delta"] = models.wiredoff->delta;
    j["stationarity"] = models.adf ? json(*models.adf) : json(nullptr);
    j["fit_version"] = fit->version;
    return json_response(200, j);
}

std::map<std::string, std::string> parse_query(const std::string& query) {
    httplib::Params params;
    httplib::detail::parse_query_text(query, params);
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : params) out.emplace(k, v);
    return out;
}

struct HttpServer::Impl {
    Impl(Service& s, std::string h, int p) : service(s), host(std::move(h)), port(p) {}

    Service& service;
    std::string host;
    int port;
    httplib::Server server;
    bool bound = false;
};

HttpServer::HttpServer(Service& service, std::string host, int port)
    : impl_(std::make_unique<Impl>(service, std::move(host), port)) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest r;
        r.method = req.method;
        r.path = req.path;
        r.body = req.body;
        for (const auto& [k, v] : req.params) r.query.emplace(k, v);
        const HttpResponse out = impl_->service.handle(r);
        res.status = out.status;
        if (!out.body.empty()) res.set_content(out.body, out.content_type);
    };
    impl_->server.Get(".*", forward);
    impl_->server.Post(".*", forward);
    impl_->server.Put(".*", forward);
    impl_->server.Delete(".*", forward);
    impl_->server.Patch(".*", forward);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind() {
    if (impl_->bound) return impl_->port;
    if (impl_->port == 0) {
        impl_->port = impl_->server.bind_to_any_port(impl_->host);
        if (impl_->port < 0) throw IoError("cannot bind " + impl_->host);
    } else if (!impl_->server.bind_to_port(impl_->host, impl_->port)) {
        throw IoError("cannot bind " + impl_->host + ":" + std::to_string(impl_->port));
    }
    impl_->bound = true;
    return impl_->port;
}

void HttpServer::listen() {
    bind();
    log::info("serving on {}:{}", impl_->host, impl_->port);
    impl_->server.listen_after_bind();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace wireoff
