#include "wireoff/wiredoff.hpp"

#include "wireoff/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

namespace wireoff {

WiredOffModel estimate_slope(std::span<const double> w_off, std::span<const double> c_problematic,
                             std::span<const double> c_other, std::vector<std::int64_t> fit_window) {
    const std::size_t n = w_off.size();
    if (c_problematic.size() != n || c_other.size() != n) {
        throw AlignmentError("wired-off inputs must cover the same minutes");
    }
    if (!fit_window.empty() && fit_window.size() != n) throw AlignmentError("fit window length differs from data");
    if (n == 0) throw ValidationError("wired-off history is empty");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += c_problematic[i] * (w_off[i] - c_other[i]);
        den += c_problematic[i] * c_problematic[i];
    }
    if (!(den > 0.0)) throw FitError("disabled-vendor baseline has zero norm");
    WiredOffModel model;
    model.delta = num / den;
    if (!std::isfinite(model.delta)) throw FitError("wired-off slope is not finite");
    model.fit_window = std::move(fit_window);
    model.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.residuals[i] = w_off[i] - model.delta * c_problematic[i] - c_other[i];
    }
    return model;
}

namespace {

void check_history(const WireoffHistory& h) {
    const auto& a = h.w_off;
    for (const MinuteSeries* s : {&h.c_problematic, &h.c_other}) {
        if (s->anchor_epoch_minute() != a.anchor_epoch_minute() || s->start_offset() != a.start_offset() ||
            s->size() != a.size()) {
            throw AlignmentError("wired-off history series are not aligned");
        }
    }
}

}  // namespace

WiredOffModel estimate_slope(const WireoffHistory& h) {
    check_history(h);
    std::vector<std::int64_t> window(h.w_off.size());
    for (std::size_t i = 0; i < window.size(); ++i) {
        window[i] = h.w_off.anchor_epoch_minute() + h.w_off.offset_of(i);
    }
    return estimate_slope(h.w_off.values(), h.c_problematic.values(), h.c_other.values(), std::move(window));
}

double predict_wiredoff(const WiredOffModel& model, double c_problematic_future, double c_other_future) {
    return model.delta * c_problematic_future + c_other_future;
}

std::vector<double> predict_wiredoff(const WiredOffModel& model, std::span<const double> c_problematic_future,
                                     std::span<const double> c_other_future) {
    if (c_problematic_future.size() != c_other_future.size()) {
        throw AlignmentError("future baselines have different lengths");
    }
    std::vector<double> out(c_problematic_future.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = predict_wiredoff(model, c_problematic_future[i], c_other_future[i]);
    }
    return out;
}

MinuteSeries ratio_series(const WireoffHistory& h) {
    check_history(h);
    std::vector<double> r(h.w_off.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(h.c_problematic[i] > 0.0)) throw DomainError("disabled-vendor baseline must be positive");
        r[i] = (h.w_off[i] - h.c_other[i]) / h.c_problematic[i];
    }
    return {h.w_off.anchor_epoch_minute(), h.w_off.start_offset(), std::move(r)};
}

namespace {

struct OlsFit {
    Eigen::VectorXd beta;
    double ssr = 0.0;
    Eigen::MatrixXd xtx_inv;
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    OlsFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < x.cols()) throw FitError("ADF regression is rank deficient");
    fit.beta = qr.solve(y);
    fit.ssr = (y - x * fit.beta).squaredNorm();
    const Eigen::MatrixXd xtx = x.transpose() * x;
    fit.xtx_inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
    return fit;
}

// Design for Δy_j on [1, y_j, Δy_{j-1}, ..., Δy_{j-lag}] over rows j = first..T-2.
void adf_design(std::span<const double> y, const std::vector<double>& dy, int lag, std::size_t first,
                Eigen::MatrixXd& x, Eigen::VectorXd& target) {
    const std::size_t rows = dy.size() - first;
    x.resize(static_cast<Eigen::Index>(rows), lag + 2);
    target.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t j = first + r;
        const auto ri = static_cast<Eigen::Index>(r);
        target(ri) = dy[j];
        x(ri, 0) = 1.0;
        x(ri, 1) = y[j];
        for (int l = 1; l <= lag; ++l) x(ri, l + 1) = dy[j - static_cast<std::size_t>(l)];
    }
}

}  // namespace

AdfResult stationarity_check(std::span<const double> y) {
    const std::size_t T = y.size();
    if (T < 25) throw ValidationError("stationarity check needs at least 25 observations");
    for (double v : y) {
        if (!std::isfinite(v)) throw DomainError("stationarity check input is not finite");
    }
    std::vector<double> dy(T - 1);
    for (std::size_t i = 0; i + 1 < T; ++i) dy[i] = y[i + 1] - y[i];

    int max_lag = static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
    // Keep enough rows for the largest regression to have residual degrees of freedom.
    max_lag = std::min(max_lag, static_cast<int>((T - 1) / 2) - 2);
    max_lag = std::max(max_lag, 0);

    Eigen::MatrixXd x;
    Eigen::VectorXd target;
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    const auto common_first = static_cast<std::size_t>(max_lag);
    for (int lag = 0; lag <= max_lag; ++lag) {
        adf_design(y, dy, lag, common_first, x, target);
        const OlsFit fit = ols(x, target);
        const auto n = static_cast<double>(x.rows());
        const double llf = -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(fit.ssr / n) + 1.0);
        const double aic = -2.0 * llf + 2.0 * static_cast<double>(x.cols());
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = lag;
        }
    }

    adf_design(y, dy, best_lag, static_cast<std::size_t>(best_lag), x, target);
    const OlsFit fit = ols(x, target);
    const auto n = static_cast<double>(x.rows());
    const double sigma2 = fit.ssr / (n - static_cast<double>(x.cols()));
    const double se = std::sqrt(sigma2 * fit.xtx_inv(1, 1));

    AdfResult res;
    res.lag = best_lag;
    res.nobs = static_cast<std::size_t>(x.rows());
    res.statistic = se > 0.0 ? fit.beta(1) / se : -std::numeric_limits<double>::infinity();
    res.stationary = res.statistic < res.critical_5;
    return res;
}

AdfResult stationarity_check(const MinuteSeries& series) { return stationarity_check(series.values()); }

DiagnosticsReport diagnose_wiredoff(const WiredOffModel& model, std::span<const double> w_off,
                                    std::span<const double> c_problematic, std::span<const double> c_other,
                                    bool intercept, std::size_t max_lag) {
    const std::size_t n = w_off.size();
    if (c_problematic.size() != n || c_other.size() != n || model.residuals.size() != n) {
        throw AlignmentError("diagnostics inputs must match the model's fit window");
    }
    std::vector<double> target(n);
    std::vector<double> predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = w_off[i] - c_other[i];
        predicted[i] = predict_wiredoff(model, c_problematic[i], c_other[i]);
    }
    ReportInputs in;
    in.residuals = model.residuals;
    in.regression_target = target;
    in.regression_regressor = c_problematic;
    in.actual = w_off;
    in.predicted = predicted;
    in.intercept = intercept;
    in.max_lag = max_lag;
    return build_report(in);
}

}  // namespace wireoff
