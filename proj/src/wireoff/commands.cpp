#include "wireoff/commands.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/serialize.hpp"

#include <algorithm>
#include <ctime>
#include <numeric>

namespace wireoff {

namespace {

template <class T>
const T& require(const std::optional<T>& value, const char* what) {
    if (!value) throw ValidationError(std::string("missing input: ") + what);
    return *value;
}

FitConfig seeded_fit(const RunConfig& c) {
    FitConfig fit = c.fit;
    fit.seed = SeedPlan::from(c.seed).fit;
    return fit;
}

SimulationConfig seeded_sim(const RunConfig& c) {
    SimulationConfig sim = c.sim;
    sim.seed = SeedPlan::from(c.seed).simulation;
    sim.threads = c.threads;
    return sim;
}

PipelineInputs pipeline_inputs(const LoadedInputs& in, const RunConfig& c, bool need_history) {
    PipelineInputs p;
    p.volumes = require(in.volumes, "volumes");
    p.availability = require(in.availability, "availability");
    p.events = require(in.events, "events");
    if (need_history) require(in.wireoff_history, "wire-off history");
    p.wireoff_history = in.wireoff_history;
    p.problematic_vendor = c.problematic_vendor;
    return p;
}

std::vector<std::int64_t> offsets(std::int64_t horizon) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(horizon));
    std::iota(out.begin(), out.end(), std::int64_t{1});
    return out;
}

}  // namespace

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_artifacts(const Artifacts& a, const std::filesystem::path& dir) {
    for (const auto& [name, content] : a.files) write_file_atomic(dir / name, content);
    write_file_atomic(dir / (a.name + ".json"), render_json(a.result));
}

std::string format_utc_minute(std::int64_t epoch_minute) {
    const std::time_t t = static_cast<std::time_t>(epoch_minute) * 60;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string recommendation_summary(const Recommendation& rec) {
    if (rec.action == Action::KeepWiredOn || !rec.m_star) return "KEEP WIRED ON";
    return "WIRE OFF at " + format_utc_minute(rec.anchor_epoch_minute + *rec.m_star) +
           " (m*=" + std::to_string(*rec.m_star) + ")";
}

nlohmann::json recommendation_json(const Recommendation& rec, const std::string& problematic_vendor,
                                   std::optional<double> delta) {
    nlohmann::json j = rec;
    j["problematic_vendor"] = problematic_vendor;
    j["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
    if (rec.m_star) j["wireoff_time_utc"] = format_utc_minute(rec.anchor_epoch_minute + *rec.m_star);
    j["t0_time_utc"] = format_utc_minute(rec.anchor_epoch_minute);
    j["summary"] = recommendation_summary(rec);
    return j;
}

nlohmann::json recommendation_json(const PipelineResult& r) {
    return recommendation_json(r.recommendation, r.models.problematic_vendor,
                               r.models.wiredoff ? std::optional<double>(r.models.wiredoff->delta) : std::nullopt);
}

Artifacts run_synth(const Scenario& scenario_in, std::optional<std::uint64_t> seed) {
    Scenario scenario = scenario_in;
    if (seed) scenario.seed = SeedPlan::from(*seed).generator;
    scenario.validate();
    GeneratedData data = generate(scenario);
    Artifacts a;
    a.name = "synth";
    a.files = {{"volumes.csv", format_volumes(data.volumes)},
               {"availability.csv", format_availability(data.availability)},
               {"events.csv", format_events(data.events)},
               {"wireoff_history.csv", format_wireoff_history(data.wireoff_history)},
               {"truth.json", render_json(data.truth)}};
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : a.files) files.push_back(f.first);
    std::size_t volume_rows = 0;
    for (const auto& [vendor, vs] : data.volumes.vendors) volume_rows += vs.series.size();
    a.result = {{"scenario", scenario.name},
                {"seed", scenario.seed},
                {"problematic_vendor", scenario.problematic_vendor},
                {"t0_epoch_minute", scenario.t0_epoch_minute},
                {"horizon", scenario.horizon},
                {"actual_wireoff_m", scenario.actual_wireoff_m},
                {"volume_rows", volume_rows},
                {"event_rows", data.events.size()},
                {"wireoff_rows", data.wireoff_history.w_off.size()},
                {"files", std::move(files)}};
    return a;
}

Artifacts run_fit_baseline(const LoadedInputs& in, const RunConfig& c) {
    const VolumeTable& volumes = require(in.volumes, "volumes");
    std::int64_t anchor = volumes.anchor_epoch_minute;
    if (in.availability) anchor = resolve_incident(*in.availability, c.problematic_vendor).t0_epoch_minute;
    const FitConfig fit = seeded_fit(c);
    const BaselineFits fits = fit_baselines(volumes_at(volumes, anchor), fit);

    const std::uint64_t cp_seed = SeedPlan::from(c.seed).changepoints;
    const std::int64_t R = c.sim.horizon;
    nlohmann::json models = nlohmann::json::object();
    nlohmann::json tuning = nlohmann::json::object();
    nlohmann::json curves = nlohmann::json::object();
    std::string csv = "offset_m,vendor_id,baseline\n";
    for (const auto& [vendor, model] : fits.models) {
        models[vendor] = model;
        const auto curve =
            forecast_vendor(model, R, derive_seed(cp_seed, "changepoints/" + vendor), c.sim.sample_changepoints);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            csv += std::to_string(i + 1) + "," + vendor + "," + format_double(curve[i]) + "\n";
        }
        curves[vendor] = curve;
    }
    for (const auto& [vendor, t] : fits.tuning) tuning[vendor] = t;

    Artifacts a;
    a.name = "baseline";
    a.result = {{"anchor_epoch_minute", anchor},
                {"models", std::move(models)},
                {"tuning", std::move(tuning)},
                {"forecast",
                 {{"horizon", R},
                  {"sample_changepoints", c.sim.sample_changepoints},
                  {"offset_m", offsets(R)},
                  {"vendors", std::move(curves)}}}};
    a.files = {{"baseline_forecast.csv", std::move(csv)}};
    return a;
}

Artifacts run_forecast_availability(const LoadedInputs& in, const RunConfig& c) {
    const AvailabilityTable& table = require(in.availability, "availability");
    const Incident incident = resolve_incident(table, c.problematic_vendor);
    const AvailabilitySeries series(incident.problematic_vendor,
                                    table.at(incident.problematic_vendor).series.reanchored(incident.t0_epoch_minute));
    const FitConfig fit = seeded_fit(c);
    const DesFit des = fit_availability(series, fit);

    const std::int64_t R = c.sim.horizon;
    std::vector<double> clamped(static_cast<std::size_t>(R));
    std::vector<double> raw(clamped.size());
    std::string csv = "offset_m,availability,raw\n";
    for (std::int64_t m = 1; m <= R; ++m) {
        const auto i = static_cast<std::size_t>(m - 1);
        clamped[i] = des_forecast(des.model, m);
        raw[i] = des_forecast_raw(des.model, m);
        csv += std::to_string(m) + "," + format_double(clamped[i]) + "," + format_double(raw[i]) + "\n";
    }

    nlohmann::json rolling{{"window", fit.des_window}, {"horizon", kDefaultRollingHorizon}};
    const auto span = series.series.end_offset() - series.series.start_offset() + 1;
    if (span >= fit.des_window + 1 + kDefaultRollingHorizon) {
        const auto evals = rolling_validate(series, fit.des_window, kDefaultRollingHorizon, fit.des_trials,
                                            derive_seed(fit.seed, "fit/availability/rolling"));
        double sum = 0.0;
        double worst = 0.0;
        for (const auto& e : evals) {
            sum += e.horizon_rmse;
            worst = std::max(worst, e.horizon_rmse);
        }
        rolling["evaluations"] = evals;
        rolling["mean_rmse"] = evals.empty() ? 0.0 : sum / static_cast<double>(evals.size());
        rolling["max_rmse"] = worst;
    } else {
        rolling["evaluations"] = nlohmann::json::array();
        rolling["mean_rmse"] = nullptr;
        rolling["max_rmse"] = nullptr;
    }

    Artifacts a;
    a.name = "availability_forecast";
    a.result = {{"vendor_id", incident.problematic_vendor},
                {"t0_epoch_minute", incident.t0_epoch_minute},
                {"model", des.model},
                {"search", des},
                {"forecast", {{"horizon", R}, {"offset_m", offsets(R)}, {"availability", clamped}, {"raw", raw}}},
                {"rolling", std::move(rolling)}};
    a.files = {{"availability_forecast.csv", std::move(csv)}};
    return a;
}

Artifacts run_estimate_behavior(const LoadedInputs& in, const RunConfig& c) {
    const auto& events = require(in.events, "events");
    std::string vendor = c.problematic_vendor;
    if (vendor.empty()) {
        if (!in.availability) {
            throw ValidationError("name the problematic vendor or pass the availability file that identifies it");
        }
        vendor = resolve_incident(*in.availability, "").problematic_vendor;
    }
    const BehaviorEstimate est = estimate_behavior(events, vendor, c.fit.behavior);
    Artifacts a;
    a.name = "behavior";
    a.result = {{"vendor_id", vendor},
                {"smoothing", c.fit.behavior.smoothing},
                {"max_retry_gap_seconds", c.fit.behavior.max_retry_gap_seconds},
                {"distributions", est.distributions},
                {"counts", est.counts}};
    return a;
}

Artifacts run_simulate_wiredon(const LoadedInputs& in, const RunConfig& c) {
    const PipelineInputs p = pipeline_inputs(in, c, false);
    const FitConfig fit = seeded_fit(c);
    const SimulationConfig sim = seeded_sim(c);
    const FittedModels models = fit_models(p, fit);
    const BaselineForecasts baselines = forecast_baselines(models, sim.horizon, sim.warmup_start,
                                                           SeedPlan::from(c.seed).changepoints, sim.sample_changepoints);
    const WiredOnForecast forecast = simulate(models, baselines, sim);
    Artifacts a;
    a.name = "wiredon";
    a.result = forecast;
    a.result["problematic_vendor"] = models.problematic_vendor;
    a.result["anchor_epoch_minute"] = models.t0_epoch_minute;
    a.files = {{"wiredon.csv", format_wiredon(forecast)}};
    return a;
}

Artifacts run_fit_wiredoff(const LoadedInputs& in, const RunConfig& c) {
    const WireoffHistory& history = require(in.wireoff_history, "wire-off history");
    const WiredOffFit fit = fit_wiredoff(history, c.fit.hc_intercept, c.max_lag);
    Artifacts a;
    a.name = "wiredoff";
    a.result = {{"model", fit.model}, {"stationarity", fit.adf ? nlohmann::json(*fit.adf) : nlohmann::json(nullptr)}};
    return a;
}

Artifacts run_diagnose(const LoadedInputs& in, const RunConfig& c) {
    const WireoffHistory& history = require(in.wireoff_history, "wire-off history");
    const WiredOffFit fit = fit_wiredoff(history, c.fit.hc_intercept, c.max_lag);
    if (!fit.model.diagnostics) {
        throw ValidationError("wire-off history too short or degenerate for residual diagnostics");
    }
    const DiagnosticsReport& report = *fit.model.diagnostics;
    Artifacts a;
    a.name = "diagnostics";
    a.result = report;
    a.result["delta"] = fit.model.delta;
    a.result["stationarity"] = fit.adf ? nlohmann::json(*fit.adf) : nlohmann::json(nullptr);
    a.files = {{"acf.csv", format_acf(report)}, {"qq.csv", format_qq(report)}};
    return a;
}

Artifacts run_recommend(const LoadedInputs& in, const RunConfig& c) {
    const PipelineInputs p = pipeline_inputs(in, c, true);
    SimulationConfig sim = c.sim;
    sim.threads = c.threads;
    const PipelineResult r = run_pipeline(p, c.fit, sim, c.seed);
    Artifacts a;
    a.name = "recommendation";
    a.result = recommendation_json(r);
    a.files = {{"wiredon.csv", format_wiredon(r.wiredon)}, {"models.json", render_json(summarize(r.models))}};
    return a;
}

}  // namespace wireoff
