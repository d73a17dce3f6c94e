#include "wireoff/availability.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wireoff {

DesRun des_run(const AvailabilitySeries& obs, double alpha, double eta) {
    const auto& a = obs.series;
    if (a.size() < 2) throw FitError("double exponential smoothing needs at least two observations");
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(eta >= 0.0 && eta <= 1.0)) {
        throw ValidationError("smoothing factors must lie in [0,1]");
    }
    const std::size_t n = a.size();
    DesRun run;
    run.level.resize(n);
    run.trend.resize(n);
    run.level[0] = a[0];
    run.trend[0] = a[1] - a[0];
    for (std::size_t i = 1; i < n; ++i) {
        run.level[i] = alpha * a[i] + (1.0 - alpha) * (run.level[i - 1] + run.trend[i - 1]);
        run.trend[i] = eta * (run.level[i] - run.level[i - 1]) + (1.0 - eta) * run.trend[i - 1];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = a[i] - run.level[i] - run.trend[i];
        sse += e * e;
    }
    run.rmse = std::sqrt(sse / static_cast<double>(n));
    return run;
}

DesFit des_fit_search(const AvailabilitySeries& obs, int trials, std::uint64_t seed) {
    if (trials < 0) throw ValidationError("trial count must be non-negative");
    if (obs.series.size() < 2) throw FitError("double exponential smoothing needs at least two observations");

    DesFit fit;
    fit.trials.reserve(static_cast<std::size_t>(trials) + 4);
    constexpr std::array<std::array<double, 2>, 4> corners{{{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}};
    for (const auto& c : corners) fit.trials.push_back({c[0], c[1], des_run(obs, c[0], c[1]).rmse});
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        const double alpha = rng.uniform();
        const double eta = rng.uniform();
        fit.trials.push_back({alpha, eta, des_run(obs, alpha, eta).rmse});
    }
    for (std::size_t i = 1; i < fit.trials.size(); ++i) {
        if (fit.trials[i].rmse < fit.trials[fit.best_trial].rmse) fit.best_trial = i;
    }
    const DesTrial& best = fit.trials[fit.best_trial];
    const DesRun run = des_run(obs, best.alpha, best.eta);
    fit.model.alpha = best.alpha;
    fit.model.eta = best.eta;
    fit.model.level = run.level.back();
    fit.model.trend = run.trend.back();
    fit.model.window_start = obs.series.start_offset();
    fit.model.window_end = obs.series.end_offset();
    fit.model.fit_rmse = run.rmse;
    return fit;
}

DesModel des_fit(const AvailabilitySeries& obs, int trials, std::uint64_t seed) {
    return des_fit_search(obs, trials, seed).model;
}

double des_forecast_raw(const DesModel& model, std::int64_t m) {
    return model.level + static_cast<double>(m) * model.trend;
}

double des_forecast(const DesModel& model, std::int64_t m) {
    if (m < 1) throw ValidationError("availability forecast horizon must be >= 1");
    return std::clamp(des_forecast_raw(model, m), 0.0, 1.0);
}

std::vector<RollingEvaluation> rolling_validate(const AvailabilitySeries& obs, int window, int horizon, int trials,
                                                std::uint64_t seed) {
    if (window < 1 || horizon < 1) throw ValidationError("rolling window and horizon must be >= 1");
    const auto n = static_cast<std::int64_t>(obs.series.size());
    if (n < window + horizon + 1) {
        throw ValidationError("series of length " + std::to_string(n) + " too short for window " +
                              std::to_string(window) + " and horizon " + std::to_string(horizon));
    }
    std::vector<RollingEvaluation> out;
    for (std::int64_t M = window; M + horizon < n; ++M) {
        const MinuteOffset first = obs.series.offset_of(static_cast<std::size_t>(M - window));
        const MinuteOffset last = obs.series.offset_of(static_cast<std::size_t>(M));
        const AvailabilitySeries train(obs.vendor_id, obs.series.slice(first, last));
        const DesModel model = des_fit(train, trials, derive_seed(seed, {static_cast<std::uint64_t>(M)}));
        RollingEvaluation eval;
        eval.window_end = M;
        double sse = 0.0;
        for (int r = 1; r <= horizon; ++r) {
            const double f = des_forecast(model, r);
            eval.forecast.push_back(f);
            const double e = obs.series[static_cast<std::size_t>(M + r)] - f;
            sse += e * e;
        }
        eval.horizon_rmse = std::sqrt(sse / horizon);
        out.push_back(std::move(eval));
    }
    return out;
}

}  // namespace wireoff
