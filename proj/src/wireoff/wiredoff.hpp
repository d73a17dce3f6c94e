#pragma once

#include "wireoff/diagnostics.hpp"
#include "wireoff/series.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wireoff {

/// Through-origin regression of the extra wired-off volume on the disabled
/// vendor's baseline: W_off − C_other = Δ·C_n0 + r.
struct WiredOffModel {
    double delta = 0.0;
    std::vector<std::int64_t> fit_window;  // epoch minutes of the historical window
    std::vector<double> residuals;
    std::optional<DiagnosticsReport> diagnostics;

    /// Δ outside [0, 1] fits the data but signals model misfit.
    bool delta_plausible() const noexcept { return delta >= 0.0 && delta <= 1.0; }
};

/// Observed wire-off window with the baselines of the disabled and the
/// remaining vendors over the same minutes.
struct WireoffHistory {
    MinuteSeries w_off;
    MinuteSeries c_problematic;
    MinuteSeries c_other;
};

WiredOffModel estimate_slope(std::span<const double> w_off, std::span<const double> c_problematic,
                             std::span<const double> c_other, std::vector<std::int64_t> fit_window = {});

/// Series overload: the three series must share anchor and offset range.
WiredOffModel estimate_slope(const WireoffHistory& history);

double predict_wiredoff(const WiredOffModel& model, double c_problematic_future, double c_other_future);

std::vector<double> predict_wiredoff(const WiredOffModel& model, std::span<const double> c_problematic_future,
                                     std::span<const double> c_other_future);

/// Per-minute share of the disabled vendor's baseline that reappeared as
/// extra volume: (W_off − C_other) / C_n0.
MinuteSeries ratio_series(const WireoffHistory& history);

struct AdfResult {
    double statistic = 0.0;
    int lag = 0;
    std::size_t nobs = 0;
    double critical_1 = -3.43;
    double critical_5 = -2.86;
    double critical_10 = -2.57;
    bool stationary = false;
};

/// Augmented Dickey-Fuller test with a constant. The lag order is chosen by
/// AIC over [0, floor(12·(T/100)^{1/4})] on a common sample, then the chosen
/// regression is refit on all usable observations.
AdfResult stationarity_check(std::span<const double> series);
AdfResult stationarity_check(const MinuteSeries& series);

/// Residual diagnostics of a fitted model against its own history.
DiagnosticsReport diagnose_wiredoff(const WiredOffModel& model, std::span<const double> w_off,
                                    std::span<const double> c_problematic, std::span<const double> c_other,
                                    bool intercept = false, std::size_t max_lag = 20);

}  // namespace wireoff
