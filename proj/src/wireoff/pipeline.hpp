#pragma once

#include "wireoff/availability.hpp"
#include "wireoff/baseline.hpp"
#include "wireoff/behavior.hpp"
#include "wireoff/decision.hpp"
#include "wireoff/io.hpp"
#include "wireoff/wiredoff.hpp"
#include "wireoff/wiredon.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wireoff {

struct PipelineInputs {
    VolumeTable volumes;
    AvailabilityTable availability;
    std::vector<AttemptEvent> events;
    std::optional<WireoffHistory> wireoff_history;
    /// Empty means: the single vendor present in the availability input.
    std::string problematic_vendor;
};

struct FitConfig {
    std::uint64_t seed = 0;
    int tuning_trials = 0;           // 0 keeps the given hyperparameters
    std::int64_t holdout_minutes = 1440;
    SeasonalSpec seasonal;
    TrendSpec trend;
    FitOptions fit_options;
    int des_trials = kDefaultDesTrials;
    int des_window = kDefaultRollingWindow;  // W: fit on [-W, 0]
    EstimateOptions behavior;
    bool hc_intercept = false;
};

struct SimulationConfig {
    std::int64_t horizon = 60;
    MinuteOffset warmup_start = -10;
    int replications = 20;
    std::uint64_t seed = 0;
    int threads = 1;
    bool stochastic_rounding = false;
    /// Off: future trend continues the last fitted slope. On: future
    /// changepoints are sampled, for uncertainty exploration.
    bool sample_changepoints = false;
};

/// Everything estimated from data at t0. Immutable once built.
struct FittedModels {
    std::string problematic_vendor;
    std::int64_t t0_epoch_minute = 0;
    std::map<std::string, BaselineModel> baselines;
    std::map<std::string, TuningResult> tuning;
    std::map<std::string, VolumeSeries> volumes;  // re-anchored at t0, cut at t0
    AvailabilitySeries availability;              // problematic vendor, anchored at t0
    DesFit des;
    BehaviorEstimate behavior;
    std::optional<WiredOffModel> wiredoff;
    std::optional<AdfResult> adf;
};

struct Incident {
    std::string problematic_vendor;
    std::int64_t t0_epoch_minute = 0;  // last availability minute of that vendor
};

/// `vendor` may be empty when the availability input covers a single vendor.
Incident resolve_incident(const AvailabilityTable& availability, const std::string& vendor);

/// Every vendor's volumes re-anchored at t0 and cut there. ValidationError
/// when a vendor stops before t0 or has no history.
std::map<std::string, VolumeSeries> volumes_at(const VolumeTable& volumes, std::int64_t t0_epoch_minute);

struct BaselineFits {
    std::map<std::string, BaselineModel> models;
    std::map<std::string, TuningResult> tuning;
};

/// Per-vendor fit, tuned first when `config.tuning_trials > 0` on a holdout
/// of min(holdout_minutes, n/4) trailing minutes.
BaselineFits fit_baselines(const std::map<std::string, VolumeSeries>& volumes, const FitConfig& config);

/// DES fit on the trailing [-W, 0] window of the availability series.
DesFit fit_availability(const AvailabilitySeries& availability, const FitConfig& config);

struct WiredOffFit {
    WiredOffModel model;
    std::optional<AdfResult> adf;  // needs at least 25 minutes of history
};

/// Slope, residual diagnostics (when computable) and the stationarity check
/// of the share series.
WiredOffFit fit_wiredoff(const WireoffHistory& history, bool hc_intercept, std::size_t max_lag = 20);

/// Resolves the problematic vendor and t0 (the last availability minute),
/// re-anchors all inputs at t0 and fits every model.
FittedModels fit_models(const PipelineInputs& inputs, const FitConfig& config);

struct BaselineForecasts {
    std::int64_t horizon = 0;
    std::map<std::string, std::vector<double>> per_vendor;  // m = 1..R
    std::vector<double> problematic;                        // C_n0 over [1, R]
    std::vector<double> other;                              // C_other over [1, R]
    MinuteSeries spawn;  // problematic-vendor volume over [warmup, R]
};

/// Baseline of one vendor over m = 1..R.
std::vector<double> forecast_vendor(const BaselineModel& model, std::int64_t horizon, std::uint64_t seed,
                                    bool sample_changepoints);

/// Per-vendor baseline forecasts plus the spawn volume: actuals for m <= 0,
/// forecasts after. With `sample_changepoints` each vendor draws future
/// changepoints from its own stream derived from `seed`.
BaselineForecasts forecast_baselines(const FittedModels& models, std::int64_t horizon, MinuteOffset warmup_start,
                                     std::uint64_t seed, bool sample_changepoints = false);

WiredOnForecast simulate(const FittedModels& models, const BaselineForecasts& baselines,
                         const SimulationConfig& config);

/// Δ̂·C_n0 + C_other over [1, R]; ConflictError when no wired-off model was fit.
std::vector<double> wiredoff_curve(const FittedModels& models, const BaselineForecasts& baselines);

std::vector<double> availability_curve(const FittedModels& models, std::int64_t horizon);

struct PipelineResult {
    FittedModels models;
    BaselineForecasts baselines;
    WiredOnForecast wiredon;
    std::vector<double> wiredoff;
    Recommendation recommendation;
};

/// Full recommendation run. `seed` feeds named sub-streams for the fit,
/// future changepoints and the simulation.
PipelineResult run_pipeline(const PipelineInputs& inputs, FitConfig fit, SimulationConfig sim, std::uint64_t seed);

nlohmann::json summarize(const FittedModels& models);
nlohmann::json to_json(const PipelineResult& result);

/// Seeds of the named sub-streams derived from one master seed.
struct SeedPlan {
    std::uint64_t fit;
    std::uint64_t changepoints;
    std::uint64_t simulation;
    std::uint64_t generator;

    static SeedPlan from(std::uint64_t master);
};

}  // namespace wireoff
