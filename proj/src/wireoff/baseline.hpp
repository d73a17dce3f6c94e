#pragma once

#include "wireoff/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wireoff {

inline constexpr std::int64_t kMinutesPerWeek = 10080;

struct SeasonalSpec {
    int harmonics = 10;                   // H
    std::int64_t period = kMinutesPerWeek;  // L, minutes
    double prior_scale = 10.0;            // sigma'
    double noise_scale = 1.0;             // sigma

    void validate() const;
};

struct TrendSpec {
    /// Changepoint offsets u_1 < ... < u_D relative to the fit anchor. When
    /// empty, `changepoint_count` changepoints are placed uniformly over the
    /// first `changepoint_range` of the history window at fit time.
    std::vector<MinuteOffset> changepoints;
    int changepoint_count = 25;
    double changepoint_range = 0.8;
    double prior_scale = 0.05;  // lambda, Laplace scale on standardized time
    std::int64_t history_length = 0;  // M + 1, filled in by the fit
};

/// Knobs of the joint MAP solver.
struct FitOptions {
    double offset_prior_scale = 5.0;  // Gaussian prior scale on kappa and theta
    int max_iterations = 10000;
    double tolerance = 1e-10;
};

/// Fitted multiplicative seasonality model. All parameters are stored in
/// per-minute units against `anchor_epoch_minute`, which is the epoch minute of
/// the last fitted observation (offset 0); history is offsets [-M, 0].
struct BaselineModel {
    std::string vendor_id;
    std::int64_t anchor_epoch_minute = 0;
    SeasonalSpec seasonal;
    TrendSpec trend;

    std::vector<double> beta;   // (alpha_1, beta_1, ..., alpha_H, beta_H)
    double kappa = 0.0;
    std::vector<double> delta;
    std::vector<double> gamma;  // gamma_d = -u_d * delta_d
    double theta = 0.0;

    double objective = 0.0;
    int iterations = 0;

    std::int64_t history_minutes() const noexcept { return trend.history_length; }
};

/// Changepoints used beyond the fitted history: the historical D entries
/// followed by one entry per future minute 1..R (delta zero when the minute
/// was not drawn as a changepoint).
struct TrendExtension {
    std::vector<MinuteOffset> changepoints;
    std::vector<double> delta;
    std::vector<double> gamma;
};

/// (cos(2 pi h m / L), sin(2 pi h m / L)) for h = 1..H, interleaved.
std::vector<double> fourier_features(MinuteOffset m, int harmonics, std::int64_t period);

/// Closed-form MAP estimate of the Fourier coefficients:
/// (X'X + (sigma/sigma')^2 I)^{-1} X' y, with rows built at the series offsets.
std::vector<double> fit_seasonal(const MinuteSeries& log_obs, const SeasonalSpec& spec);

/// Uniform changepoint placement over the first `range` fraction of a history
/// window [-M, 0]; returns strictly increasing offsets, at most M of them.
std::vector<MinuteOffset> place_changepoints(std::int64_t M, int count, double range);

/// Joint MAP fit of Fourier coefficients and the piecewise-linear trend on a
/// log-volume series. The series is re-anchored so its last observation is
/// offset 0.
BaselineModel fit_joint(const MinuteSeries& log_obs, const SeasonalSpec& seasonal, const TrendSpec& trend,
                        const FitOptions& options = {});

/// Convenience: logs the volumes and fits.
BaselineModel fit_baseline(const VolumeSeries& volumes, const SeasonalSpec& seasonal, const TrendSpec& trend,
                           const FitOptions& options = {});

/// Extension that keeps the fitted trend straight past the history.
TrendExtension deterministic_extension(const BaselineModel& model);

/// Draws future changepoints for minutes 1..R: each minute becomes a changepoint
/// with probability D/(M+1), its delta drawn from Laplace(0, lambda).
TrendExtension sample_future_changepoints(const BaselineModel& model, std::int64_t horizon, std::uint64_t seed);

double log_seasonal(const BaselineModel& model, MinuteOffset m);
double log_trend(const BaselineModel& model, MinuteOffset m, const TrendExtension& extension);
double log_trend(const BaselineModel& model, MinuteOffset m);

/// Expected baseline volume exp(x'beta) * exp(ln g) at any offset (history
/// included). Throws FitError when the value overflows.
double evaluate_baseline(const BaselineModel& model, MinuteOffset m, const TrendExtension& extension);
double evaluate_baseline(const BaselineModel& model, MinuteOffset m);

/// Forecast for a future offset m >= 1.
double predict_baseline(const BaselineModel& model, MinuteOffset m, const TrendExtension& extension);
double predict_baseline(const BaselineModel& model, MinuteOffset m);

/// Expected baseline over [first, last] (any offsets), deterministic extension.
std::vector<double> baseline_curve(const BaselineModel& model, MinuteOffset first, MinuteOffset last);

struct TuningTrial {
    SeasonalSpec seasonal;
    TrendSpec trend;
    std::optional<double> holdout_rmse;  // empty when the fit failed
    std::string failure;
};

struct TuningResult {
    SeasonalSpec seasonal;
    TrendSpec trend;
    double holdout_rmse = 0.0;
    std::size_t best_trial = 0;
    std::vector<TuningTrial> trials;
};

struct TuningBounds {
    double seasonality_prior_min = 0.01;
    double seasonality_prior_max = 10.0;
    double changepoint_prior_min = 0.001;
    double changepoint_prior_max = 1.0;
    int harmonics_min = 10;
    int harmonics_max = 30;
};

/// Random search over the prior scales (log-uniform) and harmonic count
/// (uniform integer); picks the trial with the lowest holdout RMSE of the
/// baseline forecast, ties to the lowest trial index.
TuningResult tune_hyperparameters(const VolumeSeries& train, const VolumeSeries& holdout, int trials,
                                  std::uint64_t seed, const TuningBounds& bounds = {},
                                  const TrendSpec& trend_template = {}, const FitOptions& options = {});

}  // namespace wireoff
