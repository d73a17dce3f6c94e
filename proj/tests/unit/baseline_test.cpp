#include "wireoff/baseline.hpp"
#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace wireoff;

namespace {

// Dense Gaussian elimination with partial pivoting; shares nothing with the
// solver under test.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<double> ridge_oracle(const MinuteSeries& y, int H, std::int64_t L, double ratio) {
    const std::size_t p = 2 * static_cast<std::size_t>(H);
    std::vector<std::vector<double>> a(p, std::vector<double>(p, 0.0));
    std::vector<double> b(p, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = static_cast<double>(y.offset_of(i));
        std::vector<double> x;
        for (int h = 1; h <= H; ++h) {
            const double w = 2.0 * std::numbers::pi * h * m / static_cast<double>(L);
            x.push_back(std::cos(w));
            x.push_back(std::sin(w));
        }
        for (std::size_t r = 0; r < p; ++r) {
            b[r] += x[r] * y[i];
            for (std::size_t c = 0; c < p; ++c) a[r][c] += x[r] * x[c];
        }
    }
    for (std::size_t r = 0; r < p; ++r) a[r][r] += ratio * ratio;
    return solve(a, b);
}

SeasonalSpec seasonal(int H, std::int64_t L, double prior, double noise = 1.0) {
    SeasonalSpec s;
    s.harmonics = H;
    s.period = L;
    s.prior_scale = prior;
    s.noise_scale = noise;
    return s;
}

}  // namespace

TEST(FourierFeatures, Origin) {
    const auto x = fourier_features(0, 2, 10080);
    ASSERT_EQ(x.size(), 4u);
    EXPECT_EQ(x[0], 1.0);
    EXPECT_EQ(x[1], 0.0);
    EXPECT_EQ(x[2], 1.0);
    EXPECT_EQ(x[3], 0.0);
}

TEST(FourierFeatures, QuarterAndFullPeriod) {
    const auto q = fourier_features(2520, 1, 10080);
    EXPECT_NEAR(q[0], 0.0, 1e-12);
    EXPECT_NEAR(q[1], 1.0, 1e-12);
    const auto f = fourier_features(10080, 1, 10080);
    EXPECT_NEAR(f[0], 1.0, 1e-9);
    EXPECT_NEAR(f[1], 0.0, 1e-9);
}

TEST(FitSeasonal, ZeroTarget) {
    const auto beta = fit_seasonal(MinuteSeries(0, -99, std::vector<double>(100, 0.0)), seasonal(3, 50, 1.0));
    for (double b : beta) EXPECT_EQ(b, 0.0);
}

TEST(FitSeasonal, SmallCaseMatchesDirectSolve) {
    const MinuteSeries y(0, -5, {0.3, -0.1, 0.4, 0.2, -0.5, 0.1});
    const auto beta = fit_seasonal(y, seasonal(1, 7, 1.0, 1.0));
    const auto oracle = ridge_oracle(y, 1, 7, 1.0);
    for (std::size_t i = 0; i < beta.size(); ++i) EXPECT_NEAR(beta[i], oracle[i], 1e-10);
}

TEST(FitSeasonal, RecoversKnownCoefficients) {
    const int H = 3;
    const std::int64_t L = 60;
    const std::vector<double> truth{0.5, -0.2, 0.1, 0.05, -0.03, 0.02};
    std::vector<double> v(4 * H * L);
    const MinuteOffset start = -static_cast<MinuteOffset>(v.size()) + 1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto x = fourier_features(start + static_cast<MinuteOffset>(i), H, L);
        for (std::size_t j = 0; j < x.size(); ++j) v[i] += x[j] * truth[j];
    }
    const auto beta = fit_seasonal(MinuteSeries(0, start, v), seasonal(H, L, 1e6));
    for (std::size_t j = 0; j < truth.size(); ++j) EXPECT_NEAR(beta[j], truth[j], 1e-6);
}

TEST(FitSeasonal, RandomInstancesMatchOracle) {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int H = static_cast<int>(rng.uniform_int(1, 3));
        const auto n = static_cast<std::size_t>(rng.uniform_int(2 * H + 2, 150));
        const std::int64_t L = rng.uniform_int(5, 400);
        std::vector<double> v(n);
        for (double& x : v) x = rng.normal();
        const MinuteSeries y(0, -static_cast<MinuteOffset>(n) + 1, v);
        const double prior = rng.log_uniform(0.1, 10.0);
        const auto beta = fit_seasonal(y, seasonal(H, L, prior));
        const auto oracle = ridge_oracle(y, H, L, 1.0 / prior);
        for (std::size_t j = 0; j < beta.size(); ++j)
            EXPECT_NEAR(beta[j], oracle[j], 1e-10 * std::max(1.0, std::abs(oracle[j])));
    }
}

TEST(SeasonalSpec, Validation) {
    EXPECT_THROW(seasonal(0, 10, 1.0).validate(), ValidationError);
    EXPECT_THROW(seasonal(1, 1, 1.0).validate(), ValidationError);
    EXPECT_THROW(seasonal(1, 10, 0.0).validate(), ValidationError);
    EXPECT_THROW(seasonal(1, 10, 1.0, -1.0).validate(), ValidationError);
}

TEST(FitJoint, PureLine) {
    std::vector<double> v(1000);
    const MinuteOffset start = -999;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.001 * static_cast<double>(start + static_cast<MinuteOffset>(i)) + 3.0;
    TrendSpec t;
    t.changepoint_count = 0;
    const BaselineModel m = fit_joint(MinuteSeries(0, start, v), seasonal(1, 10080, 0.01), t);
    EXPECT_NEAR(m.kappa, 0.001, 0.001 * 0.01);
    EXPECT_NEAR(m.theta, 3.0, 0.03);
    EXPECT_TRUE(m.delta.empty());
}

TEST(FitJoint, SingleSlopeBreak) {
    // slope 0.002 until -500, then -0.001; continuous at the break.
    std::vector<double> v(1000);
    const MinuteOffset start = -999;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = static_cast<double>(start + static_cast<MinuteOffset>(i));
        v[i] = m < -500 ? 0.002 * (m + 500) : -0.001 * (m + 500);
    }
    TrendSpec t;
    t.changepoints = {-500};
    t.prior_scale = 1.0;
    const BaselineModel m = fit_joint(MinuteSeries(0, start, v), seasonal(1, 10080, 0.01), t);
    ASSERT_EQ(m.delta.size(), 1u);
    EXPECT_NEAR(m.delta[0], -0.003, 0.0003);
    EXPECT_NEAR(m.kappa, 0.002, 0.0002);
}

TEST(FitJoint, ConstantSignal) {
    for (int D : {0, 3, 25}) {
        TrendSpec t;
        t.changepoint_count = D;
        const BaselineModel m =
            fit_joint(MinuteSeries(0, -499, std::vector<double>(500, 4.2)), seasonal(2, 10080, 1.0), t);
        EXPECT_NEAR(m.kappa, 0.0, 1e-3);
        for (double d : m.delta) EXPECT_NEAR(d, 0.0, 1e-3);
        EXPECT_NEAR(m.theta, 4.2, 1e-3);
    }
}

TEST(FitJoint, ContinuityIdentity) {
    Rng rng(5);
    std::vector<double> v(2000);
    double level = 5.0;
    for (double& x : v) {
        level += 0.001 * rng.normal();
        x = level + 0.01 * rng.normal();
    }
    TrendSpec t;
    t.changepoint_count = 10;
    const BaselineModel m = fit_joint(MinuteSeries(0, -1999, v), seasonal(3, 1440, 1.0), t);
    ASSERT_EQ(m.delta.size(), m.gamma.size());
    ASSERT_EQ(m.beta.size(), 6u);
    for (std::size_t d = 0; d < m.delta.size(); ++d) {
        EXPECT_NEAR(m.gamma[d], -static_cast<double>(m.trend.changepoints[d]) * m.delta[d], 1e-12);
    }
}

TEST(FitJoint, RejectsTooManyChangepoints) {
    TrendSpec t;
    t.changepoints = {-3, -2, -1, 0};
    EXPECT_THROW(fit_joint(MinuteSeries(0, -3, {1, 2, 3, 4}), seasonal(1, 10, 1.0), t), ValidationError);
}

TEST(FitJoint, Deterministic) {
    Rng rng(8);
    std::vector<double> v(800);
    for (double& x : v) x = 3.0 + 0.1 * rng.normal();
    const MinuteSeries s(0, -799, v);
    const BaselineModel a = fit_joint(s, seasonal(2, 1440, 1.0), {});
    const BaselineModel b = fit_joint(s, seasonal(2, 1440, 1.0), {});
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_EQ(a.delta, b.delta);
    EXPECT_EQ(a.kappa, b.kappa);
    EXPECT_EQ(a.theta, b.theta);
}

TEST(PlaceChangepoints, InsideRangeAndIncreasing) {
    const auto u = place_changepoints(999, 25, 0.8);
    ASSERT_EQ(u.size(), 25u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_GE(u[i], -999);
        EXPECT_LE(u[i], -999 + 800);
        if (i > 0) {
            EXPECT_GT(u[i], u[i - 1]);
        }
    }
}

TEST(FutureChangepoints, NoneWhenDZero) {
    BaselineModel m;
    m.trend.history_length = 1000;
    m.trend.prior_scale = 0.5;
    m.kappa = 0.01;
    const TrendExtension ext = sample_future_changepoints(m, 100, 3);
    for (double d : ext.delta) EXPECT_EQ(d, 0.0);
    for (MinuteOffset k = 1; k <= 100; ++k) EXPECT_DOUBLE_EQ(log_trend(m, k, ext), 0.01 * static_cast<double>(k));
}

TEST(FutureChangepoints, BinomialRate) {
    BaselineModel m;
    m.trend.history_length = 1000;
    m.trend.prior_scale = 0.5;
    for (int d = 0; d < 50; ++d) {
        m.trend.changepoints.push_back(-999 + 10 * d);
        m.delta.push_back(0.0);
        m.gamma.push_back(0.0);
    }
    const std::int64_t R = 10000;
    const TrendExtension ext = sample_future_changepoints(m, R, 11);
    ASSERT_EQ(ext.delta.size(), 50u + R);
    int nonzero = 0;
    for (std::size_t i = 50; i < ext.delta.size(); ++i) {
        if (ext.delta[i] != 0.0) ++nonzero;
        EXPECT_DOUBLE_EQ(ext.gamma[i], -static_cast<double>(ext.changepoints[i]) * ext.delta[i]);
    }
    const double frac = static_cast<double>(nonzero) / static_cast<double>(R);
    EXPECT_NEAR(frac, 0.05, 3.0 * std::sqrt(0.05 * 0.95 / static_cast<double>(R)));
}

TEST(FutureChangepoints, SeedDeterminism) {
    BaselineModel m;
    m.trend.history_length = 100;
    m.trend.prior_scale = 0.5;
    m.trend.changepoints = {-50, -20};
    m.delta = {0.0, 0.0};
    m.gamma = {0.0, 0.0};
    EXPECT_EQ(sample_future_changepoints(m, 500, 4).delta, sample_future_changepoints(m, 500, 4).delta);
    EXPECT_NE(sample_future_changepoints(m, 500, 4).delta, sample_future_changepoints(m, 500, 5).delta);
    EXPECT_THROW(sample_future_changepoints(m, 0, 4), ValidationError);
}

TEST(PredictBaseline, ZeroModelIsOne) {
    BaselineModel m;
    m.seasonal.harmonics = 2;
    m.beta.assign(4, 0.0);
    for (MinuteOffset k = 1; k <= 30; ++k) EXPECT_EQ(predict_baseline(m, k), 1.0);
}

TEST(PredictBaseline, Overflow) {
    BaselineModel m;
    m.seasonal.harmonics = 1;
    m.beta.assign(2, 0.0);
    m.kappa = 50.0;
    EXPECT_THROW(predict_baseline(m, 100), FitError);
    EXPECT_THROW(predict_baseline(m, 0), ValidationError);
}

TEST(PredictBaseline, ProductOfComponents) {
    BaselineModel m;
    m.seasonal.harmonics = 1;
    m.seasonal.period = 100;
    m.beta = {0.2, -0.1};
    m.kappa = 0.001;
    m.theta = 2.0;
    for (MinuteOffset k = 1; k <= 10; ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / 100.0;
        const double expected = std::exp(0.2 * std::cos(w) - 0.1 * std::sin(w)) * std::exp(0.001 * k + 2.0);
        EXPECT_NEAR(predict_baseline(m, k), expected, 1e-12 * expected);
    }
}

TEST(Tuning, PicksLowestHoldoutRmse) {
    Rng rng(2);
    std::vector<double> v(3000);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = 100.0 * std::exp(0.2 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 1440.0) +
                                0.02 * rng.normal());
    }
    const VolumeSeries all("v", MinuteSeries(0, -2999, v));
    const VolumeSeries train("v", all.series.slice(-2999, -500));
    const VolumeSeries hold("v", all.series.slice(-499, 0));
    TuningBounds bounds;
    bounds.harmonics_min = 1;
    bounds.harmonics_max = 4;
    TrendSpec tmpl;
    tmpl.changepoint_count = 5;
    const TuningResult r = tune_hyperparameters(train, hold, 6, 17, bounds, tmpl);
    ASSERT_EQ(r.trials.size(), 6u);
    for (std::size_t i = 0; i < r.trials.size(); ++i) {
        ASSERT_TRUE(r.trials[i].holdout_rmse.has_value());
        EXPECT_LE(r.holdout_rmse, *r.trials[i].holdout_rmse);
        if (*r.trials[i].holdout_rmse == r.holdout_rmse) {
            EXPECT_LE(r.best_trial, i);
        }
        EXPECT_GE(r.trials[i].seasonal.harmonics, 1);
        EXPECT_LE(r.trials[i].seasonal.harmonics, 4);
    }
    const TuningResult again = tune_hyperparameters(train, hold, 6, 17, bounds, tmpl);
    EXPECT_EQ(again.best_trial, r.best_trial);
    EXPECT_EQ(again.holdout_rmse, r.holdout_rmse);
}
