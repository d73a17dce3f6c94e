#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace wireoff {

/// Σ(r_i − r_{i−1})² / Σ r_i². DomainError on fewer than 2 or all-zero residuals.
double durbin_watson(std::span<const double> residuals);

struct HarveyCollierResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double degrees_of_freedom = 0.0;
    std::vector<double> recursive_residuals;
};

/// Harvey-Collier linearity test: t-test on the mean of the recursive
/// residuals of y on x (through the origin unless `intercept`). Residuals are
/// produced by rank-one least-squares updates.
HarveyCollierResult harvey_collier(std::span<const double> y, std::span<const double> x, bool intercept = false);

/// Sample autocorrelations at lags 0..max_lag with the biased (1/M)
/// normalization.
std::vector<double> acf(std::span<const double> residuals, std::size_t max_lag);

struct QqPoint {
    double theoretical = 0.0;
    double sample = 0.0;
};

/// Sorted standardized residuals paired with normal quantiles at (i − 0.5)/M.
std::vector<QqPoint> qq_points(std::span<const double> residuals);

double rmse(std::span<const double> actual, std::span<const double> predicted);

/// Half-width of the approximate 95% band for residual autocorrelations.
inline double acf_band_halfwidth(std::size_t m) {
    return m == 0 ? 0.0 : std::sqrt(2.0 / static_cast<double>(m));
}

// Acceptance bands used to read a diagnostics report.
inline constexpr double kDwLow = 1.5;
inline constexpr double kDwHigh = 3.5;
inline constexpr double kHcAlpha = 0.05;

bool dw_acceptable(double dw) noexcept;
bool hc_acceptable(double p_value) noexcept;
bool acf_lag1_within_band(double acf_lag1, std::size_t m);
/// True when strictly more than half of the lag-1 autocorrelations fall inside
/// their series' band. `lengths[i]` is the residual count behind `lag1[i]`.
bool acf_majority_within_band(std::span<const double> lag1, std::span<const std::size_t> lengths);

struct DiagnosticsReport {
    std::size_t residual_count = 0;
    double dw_statistic = 0.0;
    double hc_statistic = 0.0;
    double hc_p_value = 1.0;
    bool hc_intercept = false;
    double acf_lag1 = 0.0;
    double acf_ci_halfwidth = 0.0;
    std::vector<double> acf;  // lags 0..max_lag, for plotting
    std::vector<QqPoint> qq;
    double rmse = 0.0;

    bool dw_pass() const noexcept { return dw_acceptable(dw_statistic); }
    bool hc_pass() const noexcept { return hc_acceptable(hc_p_value); }
    bool acf_pass() const { return acf_lag1_within_band(acf_lag1, residual_count); }
};

struct ReportInputs {
    std::span<const double> residuals;
    std::span<const double> regression_target;     // y for the linearity test
    std::span<const double> regression_regressor;  // x for the linearity test
    std::span<const double> actual;
    std::span<const double> predicted;
    bool intercept = false;
    std::size_t max_lag = 20;
};

DiagnosticsReport build_report(const ReportInputs& in);

}  // namespace wireoff
