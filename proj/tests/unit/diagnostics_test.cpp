#include "wireoff/diagnostics.hpp"
#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"
#include "wireoff/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wireoff;

namespace {

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

std::vector<double> alternating(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i % 2 == 0 ? 1.0 : -1.0;
    return v;
}

// The regressor and target used for the statsmodels cross-check.
void hc_fixture(std::vector<double>& x, std::vector<double>& y) {
    Rng rng(13);
    x.resize(500);
    y.resize(500);
    for (std::size_t i = 0; i < 500; ++i) {
        x[i] = 1.0 + 0.05 * static_cast<double>(i) + static_cast<double>(i % 7) * 0.3;
        y[i] = 2.0 * x[i] + rng.normal();
    }
}

}  // namespace

TEST(DurbinWatson, Alternating) { EXPECT_NEAR(durbin_watson(alternating(6)), 10.0 / 3.0, 1e-15); }

TEST(DurbinWatson, Constant) { EXPECT_EQ(durbin_watson(std::vector<double>(10, 2.5)), 0.0); }

TEST(DurbinWatson, WhiteNoise) {
    const double dw = durbin_watson(white_noise(1, 2000));
    EXPECT_GE(dw, 1.8);
    EXPECT_LE(dw, 2.2);
}

TEST(DurbinWatson, Errors) {
    EXPECT_THROW(durbin_watson(std::vector<double>(5, 0.0)), DomainError);
    EXPECT_THROW(durbin_watson(std::vector<double>{1.0}), DomainError);
}

TEST(DurbinWatson, TracksLagOneAutocorrelation) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = white_noise(seed, 2000);
        EXPECT_LT(std::abs(durbin_watson(r) - 2.0 * (1.0 - acf(r, 1)[1])), 10.0 / 2000.0);
    }
}

TEST(HarveyCollier, PerfectFit) {
    std::vector<double> x(50);
    std::vector<double> y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        x[i] = 1.0 + static_cast<double>(i);
        y[i] = 2.0 * x[i];
    }
    const auto r = harvey_collier(y, x);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

// Frozen from statsmodels' recursive_olsresiduals(skip=k) followed by a
// one-sample t-test over all n-k recursive residuals.
TEST(HarveyCollier, GoldenThroughOrigin) {
    std::vector<double> x;
    std::vector<double> y;
    hc_fixture(x, y);
    const auto r = harvey_collier(y, x, false);
    EXPECT_NEAR(r.statistic, 0.44378556105546385, 1e-9);
    EXPECT_NEAR(r.p_value, 0.6573903825660768, 1e-9);
    EXPECT_EQ(r.degrees_of_freedom, 498.0);
    ASSERT_EQ(r.recursive_residuals.size(), 499u);
    // The first recursive residual only involves the first two points.
    const double first = (y[1] - x[1] * y[0] / x[0]) / std::sqrt(1.0 + x[1] * x[1] / (x[0] * x[0]));
    EXPECT_NEAR(r.recursive_residuals[0], first, 1e-12);
}

TEST(HarveyCollier, GoldenWithIntercept) {
    std::vector<double> x;
    std::vector<double> y;
    hc_fixture(x, y);
    const auto r = harvey_collier(y, x, true);
    EXPECT_NEAR(r.statistic, -0.21713127878616573, 1e-9);
    EXPECT_NEAR(r.p_value, 0.8281951435104733, 1e-9);
    EXPECT_EQ(r.degrees_of_freedom, 497.0);
}

TEST(HarveyCollier, DetectsCurvature) {
    std::vector<double> x(200);
    std::vector<double> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        x[i] = static_cast<double>(i + 1);
        y[i] = x[i] * x[i];
    }
    const auto r = harvey_collier(y, x, true);
    EXPECT_NEAR(r.statistic, 15.870569927407741, 1e-7);
    EXPECT_LT(r.p_value, 0.05);
}

TEST(HarveyCollier, SizeUnderNull) {
    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        std::vector<double> x(500);
        std::vector<double> y(500);
        for (std::size_t i = 0; i < 500; ++i) {
            x[i] = rng.uniform(1.0, 10.0);
            y[i] = 1.5 * x[i] + rng.normal();
        }
        accepted += harvey_collier(y, x).p_value > 0.05;
    }
    EXPECT_GE(accepted, 90);
}

TEST(HarveyCollier, MatchesRefitting) {
    // Rank-one updates agree with solving each prefix from scratch.
    Rng rng(5);
    std::vector<double> x(60);
    std::vector<double> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        x[i] = rng.uniform(1, 5);
        y[i] = 0.7 + 2.0 * x[i] + 0.3 * rng.normal();
    }
    const auto r = harvey_collier(y, x, true);
    for (std::size_t t = 2; t < 60; ++t) {
        double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < t; ++i) {
            n += 1;
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        const double det = n * sxx - sx * sx;
        const double b = (n * sxy - sx * sy) / det;
        const double a = (sy - b * sx) / n;
        // (X'X)^{-1} quadratic form at the new row.
        const double q = (sxx - 2 * sx * x[t] + n * x[t] * x[t]) / det;
        const double w = (y[t] - a - b * x[t]) / std::sqrt(1.0 + q);
        EXPECT_NEAR(r.recursive_residuals[t - 2], w, 1e-10);
    }
}

TEST(HarveyCollier, Errors) {
    const std::vector<double> z(10, 0.0);
    const std::vector<double> y(10, 1.0);
    EXPECT_THROW(harvey_collier(y, z), FitError);
    EXPECT_THROW(harvey_collier(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, true), ValidationError);
}

TEST(Acf, Basics) {
    const auto r = white_noise(3, 2000);
    const auto a = acf(r, 5);
    EXPECT_EQ(a[0], 1.0);
    EXPECT_LT(std::abs(a[1]), std::sqrt(2.0 / 2000.0) * 1.5);
    for (std::size_t m : {4u, 10u, 101u}) {
        const auto alt = acf(alternating(m), 1);
        if (m % 2 == 0) {
            EXPECT_NEAR(alt[1], -static_cast<double>(m - 1) / static_cast<double>(m), 1e-14);
        }
    }
    EXPECT_THROW(acf(std::vector<double>(5, 1.0), 2), DomainError);
    EXPECT_THROW(acf(std::vector<double>(3, 1.0), 3), ValidationError);
}

TEST(Qq, ExactQuantileInputs) {
    const std::size_t n = 400;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = stats::normal_quantile((static_cast<double>(i) + 0.5) / n);
    // Rescale so the inputs already have sample standard deviation one.
    double ss = 0;
    for (double v : q) ss += v * v;
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    for (double& v : q) v /= sd;
    const auto pts = qq_points(q);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(pts[i].sample, pts[i].theoretical / sd, 1e-6);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(pts[i].sample, q[i], 1e-12);
}

TEST(Qq, SymmetricMedianAtZero) {
    const std::vector<double> r{-3, -1, 0, 1, 3};
    const auto pts = qq_points(r);
    EXPECT_NEAR(pts[2].theoretical, 0.0, 1e-15);
    EXPECT_NEAR(pts[2].sample, 0.0, 1e-15);
}

TEST(Qq, HeavyTails) {
    Rng rng(4);
    std::vector<double> r(1000);
    for (double& v : r) {
        // Student t with 2 degrees of freedom.
        const double z = rng.normal();
        const double a = rng.normal();
        const double b = rng.normal();
        const double c = a * a + b * b;
        v = z / std::sqrt(c / 2.0);
    }
    const auto pts = qq_points(r);
    EXPECT_GT(std::abs(pts.front().sample), std::abs(pts.front().theoretical));
    EXPECT_GT(std::abs(pts.back().sample), std::abs(pts.back().theoretical));
}

TEST(Rmse, Arithmetic) {
    const std::vector<double> a{1, 2, 3};
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_NEAR(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}), std::sqrt(12.5), 1e-15);
    EXPECT_NEAR(rmse(a, std::vector<double>{1.5, 2.5, 3.5}), 0.5, 1e-15);
    EXPECT_THROW(rmse(a, std::vector<double>{1}), AlignmentError);
}

TEST(Diagnostics, ScaleInvariance) {
    const auto r = white_noise(9, 300);
    std::vector<double> s(r);
    for (double& v : s) v *= 42.0;
    EXPECT_NEAR(durbin_watson(r), durbin_watson(s), 1e-12);
    EXPECT_NEAR(acf(r, 3)[2], acf(s, 3)[2], 1e-12);
    const auto q1 = qq_points(r);
    const auto q2 = qq_points(s);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(q1[i].sample, q2[i].sample, 1e-12);
    std::vector<double> x(300);
    for (std::size_t i = 0; i < 300; ++i) x[i] = 1.0 + static_cast<double>(i % 17);
    std::vector<double> y1(300), y2(300);
    for (std::size_t i = 0; i < 300; ++i) {
        y1[i] = 3.0 * x[i] + r[i];
        y2[i] = 42.0 * y1[i];
    }
    EXPECT_NEAR(harvey_collier(y1, x).statistic, harvey_collier(y2, x).statistic, 1e-9);
}

TEST(AcceptanceBands, Helpers) {
    EXPECT_TRUE(dw_acceptable(1.5));
    EXPECT_TRUE(dw_acceptable(3.5));
    EXPECT_FALSE(dw_acceptable(1.49));
    EXPECT_TRUE(hc_acceptable(0.051));
    EXPECT_FALSE(hc_acceptable(0.05));
    EXPECT_TRUE(acf_lag1_within_band(0.01, 2000));
    EXPECT_FALSE(acf_lag1_within_band(0.04, 2000));
    const std::vector<double> lag1{0.01, 0.5, 0.02};
    const std::vector<std::size_t> len{2000, 2000, 2000};
    EXPECT_TRUE(acf_majority_within_band(lag1, len));
    const std::vector<double> lag1b{0.01, 0.5};
    const std::vector<std::size_t> lenb{2000, 2000};
    EXPECT_FALSE(acf_majority_within_band(lag1b, lenb));
}

TEST(Stats, ReferenceValues) {
    EXPECT_NEAR(stats::normal_quantile(0.975), 1.959963984540054, 1e-12);
    EXPECT_NEAR(stats::normal_quantile(0.5), 0.0, 1e-15);
    EXPECT_NEAR(stats::normal_cdf(1.0), 0.8413447460685429, 1e-12);
    // scipy.stats.t.cdf(2.0, 10)
    EXPECT_NEAR(stats::student_t_cdf(2.0, 10.0), 0.9633059826146297, 1e-10);
    EXPECT_NEAR(stats::student_t_two_sided_p(0.0, 5.0), 1.0, 1e-12);
}
