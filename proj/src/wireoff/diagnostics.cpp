#include "wireoff/diagnostics.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>

namespace wireoff {

double durbin_watson(std::span<const double> r) {
    if (r.size() < 2) throw DomainError("Durbin-Watson needs at least 2 residuals");
    double num = 0.0;
    double den = r[0] * r[0];
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double d = r[i] - r[i - 1];
        num += d * d;
        den += r[i] * r[i];
    }
    if (den == 0.0) throw DomainError("Durbin-Watson undefined for all-zero residuals");
    return num / den;
}

HarveyCollierResult harvey_collier(std::span<const double> y, std::span<const double> x, bool intercept) {
    if (y.size() != x.size()) throw AlignmentError("Harvey-Collier target and regressor lengths differ");
    const std::size_t n = y.size();
    const std::size_t k = intercept ? 2 : 1;
    if (n < k + 3) throw ValidationError("Harvey-Collier needs at least " + std::to_string(k + 3) + " points");

    auto row = [&](std::size_t i) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(k));
        if (intercept) {
            v << 1.0, x[i];
        } else {
            v << x[i];
        }
        return v;
    };

    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(kk, kk);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(kk);
    for (std::size_t i = 0; i < k; ++i) {
        const Eigen::VectorXd xi = row(i);
        xtx += xi * xi.transpose();
        xty += xi * y[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (lu.rank() < kk) throw FitError("Harvey-Collier: initial regressor block is rank deficient");
    Eigen::MatrixXd p = lu.inverse();
    Eigen::VectorXd beta = p * xty;

    HarveyCollierResult out;
    out.recursive_residuals.reserve(n - k);
    for (std::size_t i = k; i < n; ++i) {
        const Eigen::VectorXd xi = row(i);
        const Eigen::VectorXd px = p * xi;
        const double f = 1.0 + xi.dot(px);
        const double err = y[i] - xi.dot(beta);
        out.recursive_residuals.push_back(err / std::sqrt(f));
        p -= px * px.transpose() / f;
        beta += px * (err / f);
    }

    const auto& w = out.recursive_residuals;
    const auto nw = static_cast<double>(w.size());
    out.degrees_of_freedom = nw - 1.0;
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / nw;
    double ss = 0.0;
    double scale = 0.0;
    for (double v : w) {
        ss += (v - mean) * (v - mean);
        scale = std::max(scale, std::abs(v));
    }
    double yscale = 0.0;
    for (double v : y) yscale = std::max(yscale, std::abs(v));
    if (scale <= 1e-10 * std::max(1.0, yscale)) {
        // Perfect fit: the residuals carry no evidence against linearity.
        out.statistic = 0.0;
        out.p_value = 1.0;
        return out;
    }
    const double sd = std::sqrt(ss / (nw - 1.0));
    if (sd == 0.0) {
        out.statistic = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        out.p_value = 0.0;
        return out;
    }
    out.statistic = mean / (sd / std::sqrt(nw));
    out.p_value = stats::student_t_two_sided_p(out.statistic, out.degrees_of_freedom);
    return out;
}

std::vector<double> acf(std::span<const double> r, std::size_t max_lag) {
    const std::size_t n = r.size();
    if (n <= max_lag) throw ValidationError("acf needs more residuals than the maximum lag");
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    for (double v : r) c0 += (v - mean) * (v - mean);
    if (c0 == 0.0) throw DomainError("acf undefined for zero-variance residuals");
    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t i = lag; i < n; ++i) c += (r[i] - mean) * (r[i - lag] - mean);
        out[lag] = c / c0;
    }
    return out;
}

std::vector<QqPoint> qq_points(std::span<const double> r) {
    const std::size_t n = r.size();
    if (n < 3) throw ValidationError("QQ points need at least 3 residuals");
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw DomainError("QQ points undefined for zero-variance residuals");
    std::vector<double> z(r.begin(), r.end());
    for (double& v : z) v = (v - mean) / sd;
    std::sort(z.begin(), z.end());
    std::vector<QqPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        out[i] = {stats::normal_quantile(p), z[i]};
    }
    return out;
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw AlignmentError("rmse inputs have different lengths");
    if (actual.empty()) throw ValidationError("rmse of empty vectors");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

bool dw_acceptable(double dw) noexcept { return dw >= kDwLow && dw <= kDwHigh; }

bool hc_acceptable(double p_value) noexcept { return p_value > kHcAlpha; }

bool acf_lag1_within_band(double acf_lag1, std::size_t m) { return std::abs(acf_lag1) < acf_band_halfwidth(m); }

bool acf_majority_within_band(std::span<const double> lag1, std::span<const std::size_t> lengths) {
    if (lag1.size() != lengths.size()) throw AlignmentError("acf values and lengths differ in count");
    if (lag1.empty()) return false;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < lag1.size(); ++i) inside += acf_lag1_within_band(lag1[i], lengths[i]) ? 1 : 0;
    return 2 * inside > lag1.size();
}

DiagnosticsReport build_report(const ReportInputs& in) {
    DiagnosticsReport rep;
    rep.residual_count = in.residuals.size();
    rep.dw_statistic = durbin_watson(in.residuals);
    const auto hc = harvey_collier(in.regression_target, in.regression_regressor, in.intercept);
    rep.hc_statistic = hc.statistic;
    rep.hc_p_value = hc.p_value;
    rep.hc_intercept = in.intercept;
    const std::size_t max_lag = std::min(in.max_lag, in.residuals.size() - 1);
    rep.acf = acf(in.residuals, max_lag);
    rep.acf_lag1 = rep.acf.size() > 1 ? rep.acf[1] : 0.0;
    rep.acf_ci_halfwidth = acf_band_halfwidth(in.residuals.size());
    rep.qq = qq_points(in.residuals);
    rep.rmse = rmse(in.actual, in.predicted);
    return rep;
}

}  // namespace wireoff
