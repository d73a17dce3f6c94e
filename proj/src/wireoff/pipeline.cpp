#include "wireoff/pipeline.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/log.hpp"
#include "wireoff/serialize.hpp"

#include <algorithm>
#include <cmath>

namespace wireoff {

SeedPlan SeedPlan::from(std::uint64_t master) {
    return {derive_seed(master, "fit"), derive_seed(master, "changepoints"), derive_seed(master, "simulation"),
            derive_seed(master, "generator")};
}

Incident resolve_incident(const AvailabilityTable& availability, const std::string& vendor) {
    Incident out;
    if (!vendor.empty()) {
        if (!availability.vendors.contains(vendor)) {
            throw ValidationError("no availability rows for problematic vendor '" + vendor + "'");
        }
        out.problematic_vendor = vendor;
    } else {
        if (availability.vendors.size() != 1) {
            throw ValidationError("availability input covers several vendors; name the problematic one");
        }
        out.problematic_vendor = availability.vendors.begin()->first;
    }
    const auto& s = availability.at(out.problematic_vendor).series;
    out.t0_epoch_minute = s.anchor_epoch_minute() + s.end_offset();
    return out;
}

std::map<std::string, VolumeSeries> volumes_at(const VolumeTable& volumes, std::int64_t t0) {
    std::map<std::string, VolumeSeries> out;
    for (const auto& [vendor, vs] : volumes.vendors) {
        const MinuteSeries s = vs.series.reanchored(t0);
        if (s.end_offset() < 0) {
            throw ValidationError("volumes for vendor '" + vendor + "' end before t0 (the last availability minute)");
        }
        if (s.start_offset() > -1) throw ValidationError("volumes for vendor '" + vendor + "' have no history");
        out.emplace(vendor, VolumeSeries(vendor, s.slice(s.start_offset(), 0)));
    }
    return out;
}

BaselineFits fit_baselines(const std::map<std::string, VolumeSeries>& volumes, const FitConfig& cfg) {
    BaselineFits out;
    for (const auto& [vendor, vs] : volumes) {
        const std::uint64_t vendor_seed = derive_seed(cfg.seed, "fit/" + vendor);
        SeasonalSpec seasonal = cfg.seasonal;
        TrendSpec trend = cfg.trend;
        if (cfg.tuning_trials > 0) {
            const auto n = static_cast<std::int64_t>(vs.series.size());
            const std::int64_t holdout = std::min(cfg.holdout_minutes, n / 4);
            if (holdout < 1) throw ValidationError("history too short to hold out data for tuning");
            const MinuteOffset split = vs.series.end_offset() - holdout;
            VolumeSeries train(vendor, vs.series.slice(vs.series.start_offset(), split));
            VolumeSeries test(vendor, vs.series.slice(split + 1, vs.series.end_offset()));
            TuningResult tuned =
                tune_hyperparameters(train, test, cfg.tuning_trials, vendor_seed, {}, cfg.trend, cfg.fit_options);
            log::info("tuned baseline for {}: H={} sigma'={:.4g} lambda={:.4g} holdout rmse={:.4g}", vendor,
                      tuned.seasonal.harmonics, tuned.seasonal.prior_scale, tuned.trend.prior_scale,
                      tuned.holdout_rmse);
            seasonal = tuned.seasonal;
            seasonal.period = cfg.seasonal.period;
            seasonal.noise_scale = cfg.seasonal.noise_scale;
            trend = tuned.trend;
            out.tuning.emplace(vendor, std::move(tuned));
        }
        BaselineModel model = fit_baseline(vs, seasonal, trend, cfg.fit_options);
        log::debug("fitted baseline for {} in {} iterations", vendor, model.iterations);
        out.models.emplace(vendor, std::move(model));
    }
    return out;
}

DesFit fit_availability(const AvailabilitySeries& availability, const FitConfig& cfg) {
    const auto& a = availability.series;
    if (a.end_offset() - a.start_offset() < 1) throw ValidationError("availability needs at least 2 minutes");
    const MinuteOffset first = std::max<MinuteOffset>(a.start_offset(), a.end_offset() - cfg.des_window);
    return des_fit_search(AvailabilitySeries(availability.vendor_id, a.slice(first, a.end_offset())), cfg.des_trials,
                          derive_seed(cfg.seed, "fit/availability"));
}

WiredOffFit fit_wiredoff(const WireoffHistory& history, bool hc_intercept, std::size_t max_lag) {
    WiredOffFit out;
    out.model = estimate_slope(history);
    if (!out.model.delta_plausible()) {
        log::warn("wired-off slope {:.4g} lies outside [0, 1]; the linear model may not fit this history",
                  out.model.delta);
    }
    try {
        out.model.diagnostics = diagnose_wiredoff(out.model, history.w_off.values(), history.c_problematic.values(),
                                                  history.c_other.values(), hc_intercept, max_lag);
    } catch (const Error& e) {
        log::warn("wired-off diagnostics unavailable: {}", e.what());
    }
    if (history.w_off.size() >= 25) out.adf = stationarity_check(ratio_series(history));
    return out;
}

FittedModels fit_models(const PipelineInputs& in, const FitConfig& cfg) {
    FittedModels out;
    const Incident incident = resolve_incident(in.availability, in.problematic_vendor);
    out.problematic_vendor = incident.problematic_vendor;
    out.t0_epoch_minute = incident.t0_epoch_minute;
    const std::int64_t t0 = out.t0_epoch_minute;
    out.availability =
        AvailabilitySeries(out.problematic_vendor, in.availability.at(out.problematic_vendor).series.reanchored(t0));

    if (!in.volumes.vendors.contains(out.problematic_vendor)) {
        throw ValidationError("no volume rows for problematic vendor '" + out.problematic_vendor + "'");
    }
    if (in.volumes.vendors.size() < 2) throw ValidationError("volumes must include at least one other vendor");
    out.volumes = volumes_at(in.volumes, t0);

    BaselineFits fits = fit_baselines(out.volumes, cfg);
    out.baselines = std::move(fits.models);
    out.tuning = std::move(fits.tuning);
    out.des = fit_availability(out.availability, cfg);
    out.behavior = estimate_behavior(in.events, out.problematic_vendor, cfg.behavior);
    if (in.wireoff_history) {
        WiredOffFit fit = fit_wiredoff(*in.wireoff_history, cfg.hc_intercept);
        out.wiredoff = std::move(fit.model);
        out.adf = fit.adf;
    }
    return out;
}

std::vector<double> forecast_vendor(const BaselineModel& model, std::int64_t horizon, std::uint64_t seed,
                                    bool sample_changepoints) {
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    const TrendExtension ext = sample_changepoints ? sample_future_changepoints(model, horizon, seed)
                                                   : deterministic_extension(model);
    std::vector<double> curve(static_cast<std::size_t>(horizon));
    for (std::size_t i = 0; i < curve.size(); ++i) curve[i] = predict_baseline(model, static_cast<MinuteOffset>(i) + 1, ext);
    return curve;
}

BaselineForecasts forecast_baselines(const FittedModels& models, std::int64_t horizon, MinuteOffset warmup_start,
                                     std::uint64_t seed, bool sample_changepoints) {
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (warmup_start > 0) throw ValidationError("warm-up must start at or before t0");
    BaselineForecasts out;
    out.horizon = horizon;
    const auto R = static_cast<std::size_t>(horizon);
    out.problematic.assign(R, 0.0);
    out.other.assign(R, 0.0);
    for (const auto& [vendor, model] : models.baselines) {
        std::vector<double> curve =
            forecast_vendor(model, horizon, derive_seed(seed, "changepoints/" + vendor), sample_changepoints);
        auto& target = vendor == models.problematic_vendor ? out.problematic : out.other;
        for (std::size_t i = 0; i < R; ++i) target[i] += curve[i];
        out.per_vendor.emplace(vendor, std::move(curve));
    }

    const auto& history = models.volumes.at(models.problematic_vendor).series;
    const auto& model = models.baselines.at(models.problematic_vendor);
    std::vector<double> spawn;
    for (MinuteOffset m = warmup_start; m <= horizon; ++m) {
        if (m <= 0) {
            spawn.push_back(history.contains(m) ? history.at(m) : evaluate_baseline(model, m));
        } else {
            spawn.push_back(out.problematic[static_cast<std::size_t>(m - 1)]);
        }
    }
    out.spawn = MinuteSeries(models.t0_epoch_minute, warmup_start, std::move(spawn));
    return out;
}

WiredOnForecast simulate(const FittedModels& models, const BaselineForecasts& baselines,
                         const SimulationConfig& cfg) {
    if (baselines.horizon != cfg.horizon) throw AlignmentError("baseline forecasts and simulation horizon differ");
    AvailabilityProvider provider(models.availability, models.des.model);
    SimulationOptions opt;
    opt.warmup_start = cfg.warmup_start;
    opt.horizon = cfg.horizon;
    opt.replications = cfg.replications;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    opt.stochastic_rounding = cfg.stochastic_rounding;
    return simulate_wiredon(baselines.spawn, baselines.other, provider, models.behavior.distributions, opt);
}

std::vector<double> wiredoff_curve(const FittedModels& models, const BaselineForecasts& baselines) {
    if (!models.wiredoff) throw ConflictError("no wired-off model: a wire-off history is required");
    return predict_wiredoff(*models.wiredoff, baselines.problematic, baselines.other);
}

std::vector<double> availability_curve(const FittedModels& models, std::int64_t horizon) {
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (std::int64_t m = 1; m <= horizon; ++m) out[static_cast<std::size_t>(m - 1)] = des_forecast(models.des.model, m);
    return out;
}

PipelineResult run_pipeline(const PipelineInputs& inputs, FitConfig fit, SimulationConfig sim, std::uint64_t seed) {
    const SeedPlan seeds = SeedPlan::from(seed);
    fit.seed = seeds.fit;
    sim.seed = seeds.simulation;
    PipelineResult r;
    r.models = fit_models(inputs, fit);
    r.baselines =
        forecast_baselines(r.models, sim.horizon, sim.warmup_start, seeds.changepoints, sim.sample_changepoints);
    r.wiredon = simulate(r.models, r.baselines, sim);
    r.wiredoff = wiredoff_curve(r.models, r.baselines);
    r.recommendation = recommend(r.wiredon.w_on_mean, r.wiredoff, r.models.t0_epoch_minute);
    return r;
}

nlohmann::json summarize(const FittedModels& m) {
    nlohmann::json baselines = nlohmann::json::object();
    for (const auto& [vendor, model] : m.baselines) baselines[vendor] = model;
    nlohmann::json tuning = nlohmann::json::object();
    for (const auto& [vendor, t] : m.tuning) tuning[vendor] = t;
    nlohmann::json j{{"problematic_vendor", m.problematic_vendor},
                     {"t0_epoch_minute", m.t0_epoch_minute},
                     {"baselines", baselines},
                     {"availability", m.des.model},
                     {"behavior", m.behavior.distributions},
                     {"behavior_counts", m.behavior.counts}};
    if (!tuning.empty()) j["tuning"] = tuning;
    j["wiredoff"] = m.wiredoff ? nlohmann::json(*m.wiredoff) : nlohmann::json(nullptr);
    j["stationarity"] = m.adf ? nlohmann::json(*m.adf) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const PipelineResult& r) {
    nlohmann::json j = r.recommendation;
    j["problematic_vendor"] = r.models.problematic_vendor;
    j["delta"] = r.models.wiredoff ? nlohmann::json(r.models.wiredoff->delta) : nlohmann::json(nullptr);
    return j;
}

}  // namespace wireoff
