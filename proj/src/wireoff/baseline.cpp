#include "wireoff/baseline.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace wireoff {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Design matrix column layout for the joint fit.
struct Layout {
    int harmonics;
    int changepoints;
    int seasonal_cols() const { return 2 * harmonics; }
    int kappa_col() const { return 2 * harmonics; }
    int theta_col() const { return 2 * harmonics + 1; }
    int smooth_cols() const { return 2 * harmonics + 2; }
    int delta_col(int d) const { return smooth_cols() + d; }
    int cols() const { return smooth_cols() + changepoints; }
};

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

}  // namespace

void SeasonalSpec::validate() const {
    if (harmonics < 1) throw ValidationError("harmonics must be >= 1");
    if (period < 2) throw ValidationError("seasonal period must be >= 2 minutes");
    if (!(prior_scale > 0.0)) throw ValidationError("seasonality prior scale must be positive");
    if (!(noise_scale > 0.0)) throw ValidationError("noise scale must be positive");
}

std::vector<double> fourier_features(MinuteOffset m, int harmonics, std::int64_t period) {
    std::vector<double> x(2 * static_cast<std::size_t>(harmonics));
    for (int h = 1; h <= harmonics; ++h) {
        // Reduce h*m modulo L in integers so whole periods are exact.
        std::int64_t phase = (static_cast<std::int64_t>(h) * m) % period;
        if (phase < 0) phase += period;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(period);
        x[2 * (h - 1)] = std::cos(angle);
        x[2 * (h - 1) + 1] = std::sin(angle);
    }
    return x;
}

std::vector<double> fit_seasonal(const MinuteSeries& log_obs, const SeasonalSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(log_obs.size());
    const int p = 2 * spec.harmonics;
    if (n < p) {
        throw ValidationError("seasonal fit needs at least 2H observations (" + std::to_string(p) + "), got " +
                              std::to_string(n));
    }
    MatrixXd gram = MatrixXd::Zero(p, p);
    VectorXd rhs = VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto x = fourier_features(log_obs.offset_of(static_cast<std::size_t>(i)), spec.harmonics, spec.period);
        const Eigen::Map<const VectorXd> row(x.data(), p);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(row);
        rhs += row * log_obs[static_cast<std::size_t>(i)];
    }
    const double ridge = std::pow(spec.noise_scale / spec.prior_scale, 2);
    gram.diagonal().array() += ridge;
    Eigen::LLT<MatrixXd> llt(gram.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success) throw FitError("regularized normal matrix is not positive definite");
    const VectorXd beta = llt.solve(rhs);
    if (!beta.allFinite()) throw FitError("seasonal fit produced non-finite coefficients");
    return {beta.data(), beta.data() + p};
}

std::vector<MinuteOffset> place_changepoints(std::int64_t M, int count, double range) {
    std::vector<MinuteOffset> out;
    if (count <= 0 || M < 1) return out;
    const auto hist = static_cast<std::int64_t>(std::floor(static_cast<double>(M + 1) * range));
    if (hist < 2) return out;
    const int d = static_cast<int>(std::min<std::int64_t>(count, hist - 1));
    for (int i = 1; i <= d; ++i) {
        const double pos = static_cast<double>(i) * static_cast<double>(hist - 1) / static_cast<double>(d);
        const auto idx = static_cast<std::int64_t>(std::llround(pos));
        const MinuteOffset u = -M + idx;
        if (out.empty() || u > out.back()) out.push_back(u);
    }
    return out;
}

BaselineModel fit_joint(const MinuteSeries& log_obs_in, const SeasonalSpec& seasonal, const TrendSpec& trend_in,
                        const FitOptions& options) {
    seasonal.validate();
    if (!(trend_in.prior_scale > 0.0)) throw ValidationError("changepoint prior scale must be positive");
    if (log_obs_in.size() < 2) throw ValidationError("joint fit needs at least two observations");

    const MinuteSeries log_obs = log_obs_in.anchored_at_end();
    const std::int64_t M = -log_obs.start_offset();
    const auto n = static_cast<Eigen::Index>(log_obs.size());

    TrendSpec trend = trend_in;
    trend.history_length = M + 1;
    if (trend.changepoints.empty()) {
        trend.changepoints = place_changepoints(M, trend.changepoint_count, trend.changepoint_range);
    }
    for (std::size_t d = 0; d < trend.changepoints.size(); ++d) {
        const MinuteOffset u = trend.changepoints[d];
        if (u < -M || u > 0) throw ValidationError("changepoint " + std::to_string(u) + " outside fitted history");
        if (d > 0 && u <= trend.changepoints[d - 1]) throw ValidationError("changepoints must be strictly increasing");
    }
    if (static_cast<std::int64_t>(trend.changepoints.size()) >= M + 1) {
        throw ValidationError("number of changepoints must be below the history length");
    }
    trend.changepoint_count = static_cast<int>(trend.changepoints.size());

    const Layout layout{seasonal.harmonics, static_cast<int>(trend.changepoints.size())};
    const int p = layout.cols();
    const int ps = layout.smooth_cols();
    const int D = layout.changepoints;
    if (n < layout.smooth_cols()) {
        throw ValidationError("joint fit needs at least 2H+2 observations, got " + std::to_string(n));
    }

    double mean = 0.0;
    for (double v : log_obs.values()) mean += v;
    mean /= static_cast<double>(n);

    // Standardized time tau = (m + M) / M in [0, 1].
    const double span = static_cast<double>(M);
    std::vector<double> tau_cp(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) tau_cp[d] = static_cast<double>(trend.changepoints[d] + M) / span;

    MatrixXd A(n, p);
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const MinuteOffset m = log_obs.offset_of(static_cast<std::size_t>(i));
        const auto x = fourier_features(m, seasonal.harmonics, seasonal.period);
        for (int j = 0; j < layout.seasonal_cols(); ++j) A(i, j) = x[j];
        const double tau = static_cast<double>(m + M) / span;
        A(i, layout.kappa_col()) = tau;
        A(i, layout.theta_col()) = 1.0;
        for (int d = 0; d < D; ++d) A(i, layout.delta_col(d)) = std::max(0.0, tau - tau_cp[d]);
        y(i) = log_obs[static_cast<std::size_t>(i)] - mean;
    }

    const double data_weight = 1.0 / (seasonal.noise_scale * seasonal.noise_scale);
    MatrixXd H = MatrixXd::Zero(p, p);
    H.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose(), data_weight);
    H.triangularView<Eigen::StrictlyUpper>() = H.transpose();
    const VectorXd g = data_weight * (A.transpose() * y);
    for (int j = 0; j < layout.seasonal_cols(); ++j) H(j, j) += 1.0 / (seasonal.prior_scale * seasonal.prior_scale);
    const double offset_precision = 1.0 / (options.offset_prior_scale * options.offset_prior_scale);
    H(layout.kappa_col(), layout.kappa_col()) += offset_precision;
    H(layout.theta_col(), layout.theta_col()) += offset_precision;

    // Eliminate the smooth block (beta, kappa, theta): for fixed delta its
    // optimum is K^{-1}(g_u - H_ud delta), leaving a D-dimensional lasso.
    const MatrixXd K = H.topLeftCorner(ps, ps);
    Eigen::LLT<MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) throw FitError("smooth block of the posterior is not positive definite");
    const VectorXd g_u = g.head(ps);

    VectorXd delta = VectorXd::Zero(D);
    int iterations = 0;
    if (D > 0) {
        const MatrixXd H_ud = H.topRightCorner(ps, D);
        const MatrixXd Kinv_Hud = llt.solve(H_ud);
        const MatrixXd Q = H.bottomRightCorner(D, D) - H_ud.transpose() * Kinv_Hud;
        const VectorXd q = g.tail(D) - Kinv_Hud.transpose() * g_u;

        // Jacobi scaling z = s .* delta so the reduced Hessian has unit diagonal.
        VectorXd s(D);
        for (int d = 0; d < D; ++d) {
            if (!(Q(d, d) > 0.0)) throw FitError("degenerate changepoint column " + std::to_string(d));
            s(d) = std::sqrt(Q(d, d));
        }
        const MatrixXd Qs = s.cwiseInverse().asDiagonal() * Q * s.cwiseInverse().asDiagonal();
        const VectorXd qs = q.cwiseQuotient(s);
        VectorXd threshold(D);
        for (int d = 0; d < D; ++d) threshold(d) = 1.0 / (trend.prior_scale * s(d));

        auto smooth = [&](const VectorXd& z) { return 0.5 * z.dot(Qs * z) - qs.dot(z); };
        auto objective = [&](const VectorXd& z) { return smooth(z) + threshold.dot(z.cwiseAbs()); };

        // Exact solve on the support of `z` with its signs held fixed. Returns
        // the candidate when it satisfies the optimality conditions, which
        // settles the slow tail of proximal gradient on correlated hinges.
        auto polish = [&](const VectorXd& z) -> std::optional<VectorXd> {
            std::vector<int> support;
            for (int d = 0; d < D; ++d) {
                if (z(d) != 0.0) support.push_back(d);
            }
            VectorXd cand = VectorXd::Zero(D);
            if (!support.empty()) {
                const auto k = static_cast<Eigen::Index>(support.size());
                MatrixXd Qss(k, k);
                VectorXd rhs(k);
                for (Eigen::Index a = 0; a < k; ++a) {
                    const int i = support[static_cast<std::size_t>(a)];
                    rhs(a) = qs(i) - threshold(i) * (z(i) > 0.0 ? 1.0 : -1.0);
                    for (Eigen::Index b = 0; b < k; ++b) Qss(a, b) = Qs(i, support[static_cast<std::size_t>(b)]);
                }
                Eigen::LDLT<MatrixXd> ldlt(Qss);
                if (ldlt.info() != Eigen::Success) return std::nullopt;
                const VectorXd sol = ldlt.solve(rhs);
                for (Eigen::Index a = 0; a < k; ++a) {
                    const int i = support[static_cast<std::size_t>(a)];
                    if (sol(a) * z(i) <= 0.0) return std::nullopt;  // sign flipped: support is wrong
                    cand(i) = sol(a);
                }
            }
            const VectorXd grad = Qs * cand - qs;
            const double slack = 1e-9 * (1.0 + qs.cwiseAbs().maxCoeff());
            for (int d = 0; d < D; ++d) {
                if (cand(d) == 0.0 && std::abs(grad(d)) > threshold(d) + slack) return std::nullopt;
                if (cand(d) != 0.0 && std::abs(grad(d) + threshold(d) * (cand(d) > 0.0 ? 1.0 : -1.0)) > slack) {
                    return std::nullopt;
                }
            }
            return cand;
        };

        // Accelerated proximal gradient with backtracking and adaptive restart.
        VectorXd z = VectorXd::Zero(D);
        VectorXd w = z;
        double t = 1.0;
        double L = 1.0;
        double f_prev = objective(z);
        bool converged = false;
        const double step_tol = 1e-8 * (1.0 + qs.norm());
        for (iterations = 1; iterations <= options.max_iterations; ++iterations) {
            const VectorXd grad = Qs * w - qs;
            const double f_w = smooth(w);
            VectorXd z_new(D);
            for (;;) {
                for (int d = 0; d < D; ++d) z_new(d) = soft_threshold(w(d) - grad(d) / L, threshold(d) / L);
                const VectorXd diff = z_new - w;
                if (smooth(z_new) <= f_w + grad.dot(diff) + 0.5 * L * diff.squaredNorm() + 1e-14 * std::abs(f_w)) break;
                L *= 2.0;
            }
            const double f_new = objective(z_new);
            if (f_new > f_prev) {
                // Momentum overshot: restart from the last accepted point.
                w = z;
                t = 1.0;
                continue;
            }
            const double step = L * (z_new - w).norm();
            const double decrease = f_prev - f_new;
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            w = z_new + ((t - 1.0) / t_next) * (z_new - z);
            z = z_new;
            t = t_next;
            f_prev = f_new;
            if (decrease < options.tolerance * std::max(1.0, std::abs(f_new)) && step <= step_tol) {
                converged = true;
                break;
            }
            if (iterations % 25 == 0) {
                if (auto exact = polish(z)) {
                    z = *exact;
                    f_prev = objective(z);
                    converged = true;
                    break;
                }
            }
        }
        if (!converged) {
            throw FitError("joint MAP fit did not converge after " + std::to_string(options.max_iterations) +
                               " iterations (objective " + std::to_string(f_prev) + ")",
                           f_prev);
        }
        delta = z.cwiseQuotient(s);
    }

    VectorXd rhs = g_u;
    if (D > 0) rhs -= H.topRightCorner(ps, D) * delta;
    const VectorXd u = llt.solve(rhs);

    VectorXd w_full(p);
    w_full.head(ps) = u;
    w_full.tail(D) = delta;
    if (!w_full.allFinite()) throw FitError("joint fit produced non-finite parameters");
    const VectorXd resid = y - A * w_full;
    double final_objective = 0.5 * data_weight * resid.squaredNorm();
    final_objective += 0.5 * u.head(layout.seasonal_cols()).squaredNorm() /
                       (seasonal.prior_scale * seasonal.prior_scale);
    final_objective += 0.5 * offset_precision * (u(layout.kappa_col()) * u(layout.kappa_col()) +
                                                 u(layout.theta_col()) * u(layout.theta_col()));
    final_objective += delta.cwiseAbs().sum() / trend.prior_scale;

    BaselineModel model;
    model.anchor_epoch_minute = log_obs.anchor_epoch_minute();
    model.seasonal = seasonal;
    model.trend = trend;
    model.beta.assign(u.data(), u.data() + layout.seasonal_cols());
    const double kappa_std = u(layout.kappa_col());
    model.kappa = kappa_std / span;
    model.theta = u(layout.theta_col()) + mean + kappa_std;
    model.delta.resize(static_cast<std::size_t>(D));
    model.gamma.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        model.delta[d] = delta(d) / span;
        model.gamma[d] = -static_cast<double>(trend.changepoints[d]) * model.delta[d];
    }
    model.objective = final_objective;
    model.iterations = iterations;
    return model;
}

BaselineModel fit_baseline(const VolumeSeries& volumes, const SeasonalSpec& seasonal, const TrendSpec& trend,
                           const FitOptions& options) {
    BaselineModel model = fit_joint(to_log(volumes), seasonal, trend, options);
    model.vendor_id = volumes.vendor_id;
    return model;
}

TrendExtension deterministic_extension(const BaselineModel& model) {
    return {model.trend.changepoints, model.delta, model.gamma};
}

TrendExtension sample_future_changepoints(const BaselineModel& model, std::int64_t horizon, std::uint64_t seed) {
    if (horizon < 1) throw ValidationError("future changepoint horizon must be >= 1");
    TrendExtension ext = deterministic_extension(model);
    const double probability =
        static_cast<double>(model.delta.size()) / static_cast<double>(std::max<std::int64_t>(1, model.trend.history_length));
    // The Laplace scale lives on standardized time; convert to per-minute.
    const double span = static_cast<double>(std::max<std::int64_t>(1, model.trend.history_length - 1));
    Rng rng(seed);
    for (std::int64_t m = 1; m <= horizon; ++m) {
        double d = 0.0;
        const double u = rng.uniform();
        const double draw = rng.laplace(model.trend.prior_scale);
        if (u < probability) d = draw / span;
        ext.changepoints.push_back(m);
        ext.delta.push_back(d);
        ext.gamma.push_back(-static_cast<double>(m) * d);
    }
    return ext;
}

double log_seasonal(const BaselineModel& model, MinuteOffset m) {
    const auto x = fourier_features(m, model.seasonal.harmonics, model.seasonal.period);
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * model.beta[j];
    return s;
}

double log_trend(const BaselineModel& model, MinuteOffset m, const TrendExtension& ext) {
    double rate = model.kappa;
    double offset = model.theta;
    for (std::size_t d = 0; d < ext.changepoints.size(); ++d) {
        if (m >= ext.changepoints[d]) {
            rate += ext.delta[d];
            offset += ext.gamma[d];
        }
    }
    return rate * static_cast<double>(m) + offset;
}

double log_trend(const BaselineModel& model, MinuteOffset m) {
    return log_trend(model, m, deterministic_extension(model));
}

double evaluate_baseline(const BaselineModel& model, MinuteOffset m, const TrendExtension& ext) {
    const double log_value = log_seasonal(model, m) + log_trend(model, m, ext);
    const double value = std::exp(log_value);
    if (!std::isfinite(value) || value <= 0.0) {
        throw FitError("baseline forecast overflowed at offset " + std::to_string(m) + " (log value " +
                       std::to_string(log_value) + ")");
    }
    return value;
}

double evaluate_baseline(const BaselineModel& model, MinuteOffset m) {
    return evaluate_baseline(model, m, deterministic_extension(model));
}

double predict_baseline(const BaselineModel& model, MinuteOffset m, const TrendExtension& ext) {
    if (m < 1) throw ValidationError("baseline forecast offset must be >= 1, got " + std::to_string(m));
    return evaluate_baseline(model, m, ext);
}

double predict_baseline(const BaselineModel& model, MinuteOffset m) {
    return predict_baseline(model, m, deterministic_extension(model));
}

std::vector<double> baseline_curve(const BaselineModel& model, MinuteOffset first, MinuteOffset last) {
    const TrendExtension ext = deterministic_extension(model);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max<MinuteOffset>(0, last - first + 1)));
    for (MinuteOffset m = first; m <= last; ++m) out.push_back(evaluate_baseline(model, m, ext));
    return out;
}

TuningResult tune_hyperparameters(const VolumeSeries& train, const VolumeSeries& holdout, int trials,
                                  std::uint64_t seed, const TuningBounds& bounds, const TrendSpec& trend_template,
                                  const FitOptions& options) {
    if (trials < 1) throw ValidationError("hyperparameter search needs at least one trial");
    if (train.series.empty() || holdout.series.empty()) throw ValidationError("train and holdout must be non-empty");
    const std::int64_t train_end = train.series.anchor_epoch_minute() + train.series.end_offset();
    const std::int64_t holdout_start = holdout.series.anchor_epoch_minute() + holdout.series.start_offset();
    if (holdout_start <= train_end) throw ValidationError("holdout must lie strictly after the training window");

    TuningResult result;
    Rng rng(seed);
    std::optional<std::size_t> best;
    for (int i = 0; i < trials; ++i) {
        TuningTrial trial;
        trial.seasonal.prior_scale = rng.log_uniform(bounds.seasonality_prior_min, bounds.seasonality_prior_max);
        trial.trend = trend_template;
        trial.trend.prior_scale = rng.log_uniform(bounds.changepoint_prior_min, bounds.changepoint_prior_max);
        trial.seasonal.harmonics = static_cast<int>(rng.uniform_int(bounds.harmonics_min, bounds.harmonics_max));
        try {
            const BaselineModel model = fit_baseline(train, trial.seasonal, trial.trend, options);
            double sse = 0.0;
            for (std::size_t k = 0; k < holdout.series.size(); ++k) {
                const std::int64_t epoch = holdout.series.anchor_epoch_minute() + holdout.series.offset_of(k);
                const double err = predict_baseline(model, epoch - model.anchor_epoch_minute) - holdout.series[k];
                sse += err * err;
            }
            trial.holdout_rmse = std::sqrt(sse / static_cast<double>(holdout.series.size()));
        } catch (const Error& e) {
            trial.failure = e.what();
        }
        if (trial.holdout_rmse && (!best || *trial.holdout_rmse < *result.trials[*best].holdout_rmse)) {
            best = result.trials.size();
        }
        result.trials.push_back(std::move(trial));
    }
    if (!best) throw TuneError("all " + std::to_string(trials) + " hyperparameter trials failed to fit");
    result.best_trial = *best;
    result.seasonal = result.trials[*best].seasonal;
    result.trend = result.trials[*best].trend;
    result.holdout_rmse = *result.trials[*best].holdout_rmse;
    return result;
}

}  // namespace wireoff
