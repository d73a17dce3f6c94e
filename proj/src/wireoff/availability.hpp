#pragma once

#include "wireoff/series.hpp"

#include <cstdint>
#include <vector>

namespace wireoff {

/// Holt double exponential smoothing state fitted to recent availability.
struct DesModel {
    double alpha = 0.0;  // smoothing factor
    double eta = 0.0;    // trend factor
    double level = 0.0;  // S at t0
    double trend = 0.0;  // b at t0
    MinuteOffset window_start = 0;  // -M
    MinuteOffset window_end = 0;    // 0
    double fit_rmse = 0.0;
};

struct DesRun {
    std::vector<double> level;
    std::vector<double> trend;
    double rmse = 0.0;
};

/// Runs the smoothing recursions over the whole series, initialized with
/// S = a_first and b = a_second - a_first, and scores
/// sqrt(mean (a - S - b)^2) over every point.
DesRun des_run(const AvailabilitySeries& obs, double alpha, double eta);

struct DesTrial {
    double alpha = 0.0;
    double eta = 0.0;
    double rmse = 0.0;
};

struct DesFit {
    DesModel model;
    std::vector<DesTrial> trials;  // evaluation order; index 0..3 are the corners
    std::size_t best_trial = 0;
};

inline constexpr int kDefaultDesTrials = 256;

/// Random search over (alpha, eta) in [0,1]^2. The four corners are always
/// evaluated first, followed by `trials` uniform samples. Ties go to the lowest
/// trial index.
DesFit des_fit_search(const AvailabilitySeries& obs, int trials, std::uint64_t seed);
DesModel des_fit(const AvailabilitySeries& obs, int trials, std::uint64_t seed);

/// Unclamped S_0 + m b_0.
double des_forecast_raw(const DesModel& model, std::int64_t m);
/// S_0 + m b_0 clamped to [0, 1].
double des_forecast(const DesModel& model, std::int64_t m);

struct RollingEvaluation {
    std::int64_t window_end = 0;  // index M into the series
    double horizon_rmse = 0.0;
    std::vector<double> forecast;  // R values for M+1..M+R
};

inline constexpr int kDefaultRollingWindow = 10;
inline constexpr int kDefaultRollingHorizon = 2;

/// Fit on [M-W, M], forecast M+1..M+R, for every M with both ends available.
/// M counts positions from the start of the series (0-based).
std::vector<RollingEvaluation> rolling_validate(const AvailabilitySeries& obs, int window, int horizon, int trials,
                                                std::uint64_t seed);

}  // namespace wireoff
