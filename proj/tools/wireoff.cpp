// Command-line front end. Talks to the engine only through the C interface.

#include "wireoff/wireoff.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string scenario;
    std::string volumes;
    std::string availability;
    std::string events;
    std::string wireoff_history;
    std::string output_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> horizon;
    std::optional<int> warmup;
    std::optional<int> replications;
    std::optional<int> trials;
    std::optional<int> des_trials;
    std::optional<int> des_window;
    std::optional<int> harmonics;
    std::optional<int> max_lag;
    std::optional<int> max_retry_gap;
    std::optional<std::string> problematic_vendor;
    bool no_smoothing = false;
    bool hc_intercept = false;
    bool stochastic_rounding = false;
    bool sample_changepoints = false;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string state_dir;
};

/// Failure reported by the engine, already mapped to an exit code.
struct Failure {
    int code;
    std::string message;
};

void check(wo_status status) {
    if (status == WO_OK) return;
    throw Failure{wo_status_is_input_error(status) ? kExitUsage : kExitInternal,
                  std::string(wo_status_name(status)) + " error: " + wo_last_error()};
}

std::string take(char* s) {
    std::string out(s ? s : "");
    wo_string_free(s);
    return out;
}

std::string config_json(const Options& o) {
    nlohmann::json j = nlohmann::json::object();
    if (o.seed) j["seed"] = *o.seed;
    if (o.threads) j["threads"] = *o.threads;
    if (o.horizon) j["horizon"] = *o.horizon;
    if (o.warmup) j["warmup"] = *o.warmup;
    if (o.replications) j["replications"] = *o.replications;
    if (o.trials) j["trials"] = *o.trials;
    if (o.des_trials) j["des_trials"] = *o.des_trials;
    if (o.des_window) j["des_window"] = *o.des_window;
    if (o.harmonics) j["harmonics"] = *o.harmonics;
    if (o.max_lag) j["max_lag"] = *o.max_lag;
    if (o.max_retry_gap) j["max_retry_gap_seconds"] = *o.max_retry_gap;
    if (o.problematic_vendor) j["problematic_vendor"] = *o.problematic_vendor;
    if (o.no_smoothing) j["smoothing"] = false;
    if (o.hc_intercept) j["hc_intercept"] = true;
    if (o.stochastic_rounding) j["stochastic_rounding"] = true;
    if (o.sample_changepoints) j["sample_changepoints"] = true;
    return j.dump();
}

/// Owns a wo_inputs handle for the duration of one command.
class Inputs {
public:
    Inputs() { check(wo_inputs_create(&handle_)); }
    ~Inputs() { wo_inputs_free(handle_); }
    Inputs(const Inputs&) = delete;
    Inputs& operator=(const Inputs&) = delete;

    void load(wo_input_kind kind, const std::string& path) {
        if (!path.empty()) check(wo_inputs_load_file(handle_, kind, path.c_str()));
    }
    const wo_inputs* get() const { return handle_; }

private:
    wo_inputs* handle_ = nullptr;
};

/// An explicit flag wins; otherwise a wireoff_history.csv next to the volumes
/// file is used when present.
std::string resolve_history(const Options& o) {
    if (!o.wireoff_history.empty()) return o.wireoff_history;
    if (!o.volumes.empty()) {
        const auto sibling = std::filesystem::path(o.volumes).parent_path() / "wireoff_history.csv";
        if (std::filesystem::exists(sibling)) return sibling.string();
    }
    throw Failure{kExitUsage,
                  "no wire-off history: pass --wireoff-history or place wireoff_history.csv next to the volumes file"};
}

int run_stage(wo_command command, const Options& o) {
    Inputs in;
    in.load(WO_INPUT_VOLUMES, o.volumes);
    in.load(WO_INPUT_AVAILABILITY, o.availability);
    in.load(WO_INPUT_EVENTS, o.events);
    if (command == WO_CMD_RECOMMEND) {
        in.load(WO_INPUT_WIREOFF_HISTORY, resolve_history(o));
    } else {
        in.load(WO_INPUT_WIREOFF_HISTORY, o.wireoff_history);
    }
    char* result = nullptr;
    check(wo_run(command, in.get(), config_json(o).c_str(), o.output_dir.c_str(), &result));
    const std::string json = take(result);
    std::cout << json;
    if (command == WO_CMD_RECOMMEND) {
        char* line = nullptr;
        check(wo_recommendation_summary(json.c_str(), &line));
        std::cout << take(line) << "\n";
    }
    return kExitOk;
}

int run_synth(const Options& o) {
    char* result = nullptr;
    check(wo_synth(o.scenario.c_str(), o.seed.value_or(0), o.seed.has_value() ? 1 : 0, o.output_dir.c_str(),
                   &result));
    std::cout << take(result);
    return kExitOk;
}

int run_serve(const Options& o) {
    // Block termination signals here so every server thread inherits the mask;
    // a dedicated thread waits for them and stops the server.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    wo_server* server = nullptr;
    check(wo_server_create(o.host.c_str(), o.port, o.state_dir.empty() ? nullptr : o.state_dir.c_str(),
                           o.threads.value_or(1), &server));
    int port = 0;
    const wo_status bound = wo_server_bind(server, &port);
    if (bound != WO_OK) {
        wo_server_free(server);
        check(bound);
    }
    std::cerr << "listening on http://" << o.host << ":" << port << "\n";
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        wo_server_stop(server);
    });
    const wo_status status = wo_server_run(server);
    if (waiter.joinable()) {
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
    }
    wo_server_free(server);
    check(status);
    return kExitOk;
}

void add_seed(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "Master seed; every random stream derives from it");
}

void add_output(CLI::App* cmd, Options& o) {
    cmd->add_option("--output-dir", o.output_dir, "Directory for artifacts")->capture_default_str();
}

void add_fit_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--trials", o.trials, "Baseline hyperparameter search trials (0 keeps defaults)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--harmonics", o.harmonics, "Fourier harmonics when not tuning")->check(CLI::PositiveNumber);
}

void add_vendor(CLI::App* cmd, Options& o) {
    cmd->add_option("--problematic-vendor", o.problematic_vendor,
                    "Vendor under incident (default: the only vendor in the availability file)");
}

void add_threads(CLI::App* cmd, Options& o) {
    cmd->add_option("--threads", o.threads, "Worker cap; results do not depend on it")->check(CLI::PositiveNumber);
}

void add_horizon(CLI::App* cmd, Options& o) {
    cmd->add_option("--horizon", o.horizon, "Forecast horizon in minutes")->check(CLI::PositiveNumber);
}

void add_simulation_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--replications", o.replications, "Monte Carlo replications")->check(CLI::PositiveNumber);
    cmd->add_option("--warmup", o.warmup, "First spawn minute relative to t0 (<= -10)");
    cmd->add_flag("--stochastic-rounding", o.stochastic_rounding, "Round fractional spawn counts at random");
    cmd->add_flag("--sample-changepoints", o.sample_changepoints,
                  "Sample future trend changepoints instead of extending the last slope");
    cmd->add_option("--des-trials", o.des_trials, "Random (alpha, eta) pairs tried for availability")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--des-window", o.des_window, "Availability fit window in minutes")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wire-off decision engine: forecasts completed customer experiences with a degraded vendor "
                 "wired on and off and recommends when to wire it off."};
    app.require_subcommand(1);
    app.set_version_flag("--version", wo_version());
    Options o;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic incident from a scenario file");
    synth->add_option("--scenario", o.scenario, "Scenario JSON")->required();
    add_seed(synth, o);
    add_output(synth, o);

    auto* fit_baseline = app.add_subcommand("fit-baseline", "Fit per-vendor baselines and forecast them");
    fit_baseline->add_option("--volumes", o.volumes, "volumes.csv")->required();
    fit_baseline->add_option("--availability", o.availability, "availability.csv (sets t0 when given)");
    add_vendor(fit_baseline, o);
    add_fit_flags(fit_baseline, o);
    add_horizon(fit_baseline, o);
    fit_baseline->add_flag("--sample-changepoints", o.sample_changepoints, "Sample future trend changepoints");
    add_seed(fit_baseline, o);
    add_output(fit_baseline, o);

    auto* forecast_availability =
        app.add_subcommand("forecast-availability", "Fit the availability trend and forecast it");
    forecast_availability->add_option("--availability", o.availability, "availability.csv")->required();
    add_vendor(forecast_availability, o);
    add_horizon(forecast_availability, o);
    forecast_availability->add_option("--des-trials", o.des_trials, "Random (alpha, eta) pairs tried")
        ->check(CLI::NonNegativeNumber);
    forecast_availability->add_option("--des-window", o.des_window, "Fit window in minutes")
        ->check(CLI::PositiveNumber);
    add_seed(forecast_availability, o);
    add_output(forecast_availability, o);

    auto* estimate_behavior = app.add_subcommand("estimate-behavior", "Estimate retry, switch and delay distributions");
    estimate_behavior->add_option("--events", o.events, "events.csv")->required();
    estimate_behavior->add_option("--availability", o.availability, "availability.csv (identifies the vendor)");
    add_vendor(estimate_behavior, o);
    estimate_behavior->add_flag("--no-smoothing", o.no_smoothing, "Raw frequencies without add-one smoothing");
    estimate_behavior->add_option("--max-retry-gap", o.max_retry_gap, "Seconds after which an event starts anew")
        ->check(CLI::PositiveNumber);
    add_output(estimate_behavior, o);

    auto* simulate_wiredon = app.add_subcommand("simulate-wiredon", "Monte Carlo forecast with the vendor wired on");
    simulate_wiredon->add_option("--volumes", o.volumes, "volumes.csv")->required();
    simulate_wiredon->add_option("--availability", o.availability, "availability.csv")->required();
    simulate_wiredon->add_option("--events", o.events, "events.csv")->required();
    add_vendor(simulate_wiredon, o);
    add_fit_flags(simulate_wiredon, o);
    add_horizon(simulate_wiredon, o);
    add_simulation_flags(simulate_wiredon, o);
    add_threads(simulate_wiredon, o);
    add_seed(simulate_wiredon, o);
    add_output(simulate_wiredon, o);

    auto* fit_wiredoff = app.add_subcommand("fit-wiredoff", "Fit the wired-off slope from a past wire-off");
    fit_wiredoff->add_option("--wireoff-history", o.wireoff_history, "wireoff_history.csv")->required();
    fit_wiredoff->add_flag("--hc-intercept", o.hc_intercept, "Linearity test with an intercept");
    fit_wiredoff->add_option("--max-lag", o.max_lag, "Autocorrelation lags to report")->check(CLI::PositiveNumber);
    add_output(fit_wiredoff, o);

    auto* diagnose = app.add_subcommand("diagnose", "Residual diagnostics of the wired-off model");
    diagnose->add_option("--wireoff-history", o.wireoff_history, "wireoff_history.csv")->required();
    diagnose->add_flag("--hc-intercept", o.hc_intercept, "Linearity test with an intercept");
    diagnose->add_option("--max-lag", o.max_lag, "Autocorrelation lags to report")->check(CLI::PositiveNumber);
    add_output(diagnose, o);

    auto* recommend = app.add_subcommand("recommend", "End-to-end run and wire-off recommendation");
    recommend->add_option("--volumes", o.volumes, "volumes.csv")->required();
    recommend->add_option("--availability", o.availability, "availability.csv")->required();
    recommend->add_option("--events", o.events, "events.csv")->required();
    recommend->add_option("--wireoff-history", o.wireoff_history,
                          "wireoff_history.csv (default: next to the volumes file)");
    add_vendor(recommend, o);
    add_fit_flags(recommend, o);
    add_horizon(recommend, o);
    add_simulation_flags(recommend, o);
    recommend->add_flag("--hc-intercept", o.hc_intercept, "Linearity test with an intercept");
    add_threads(recommend, o);
    add_seed(recommend, o);
    add_output(recommend, o);

    auto* serve = app.add_subcommand("serve", "HTTP/JSON service");
    serve->add_option("--host", o.host, "Interface to bind")->capture_default_str();
    serve->add_option("--port", o.port, "Port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--state-dir", o.state_dir, "Directory for session snapshots");
    add_threads(serve, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        std::cerr << sub->help();
        return kExitUsage;
    }

    try {
        if (synth->parsed()) return run_synth(o);
        if (fit_baseline->parsed()) return run_stage(WO_CMD_FIT_BASELINE, o);
        if (forecast_availability->parsed()) return run_stage(WO_CMD_FORECAST_AVAILABILITY, o);
        if (estimate_behavior->parsed()) return run_stage(WO_CMD_ESTIMATE_BEHAVIOR, o);
        if (simulate_wiredon->parsed()) return run_stage(WO_CMD_SIMULATE_WIREDON, o);
        if (fit_wiredoff->parsed()) return run_stage(WO_CMD_FIT_WIREDOFF, o);
        if (diagnose->parsed()) return run_stage(WO_CMD_DIAGNOSE, o);
        if (recommend->parsed()) return run_stage(WO_CMD_RECOMMEND, o);
        if (serve->parsed()) return run_serve(o);
    } catch (const Failure& f) {
        std::cerr << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
