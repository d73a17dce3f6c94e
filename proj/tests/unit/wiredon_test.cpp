#include "wireoff/errors.hpp"
#include "wireoff/wiredon.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace wireoff;

namespace {

BehaviorDistributions behavior(double retry, double sw, std::int64_t delay) {
    return BehaviorDistributions::from_parameters({retry}, {sw}, {{delay, 1.0}});
}

MinuteSeries flat_volume(double v, MinuteOffset first, MinuteOffset last) {
    return MinuteSeries(0, first, std::vector<double>(static_cast<std::size_t>(last - first + 1), v));
}

SimulationOptions options(std::int64_t R, int reps, std::uint64_t seed, int threads = 1) {
    SimulationOptions o;
    o.horizon = R;
    o.replications = reps;
    o.seed = seed;
    o.threads = threads;
    return o;
}

}  // namespace

TEST(Provider, ActualsThenClampedForecast) {
    DesModel m;
    m.level = 0.3;
    m.trend = -0.1;
    const AvailabilityProvider p(AvailabilitySeries("n0", MinuteSeries(0, -2, {0.9, 0.8, 0.7})), m);
    EXPECT_EQ(p.at(-2), 0.9);
    EXPECT_EQ(p.at(0), 0.7);
    EXPECT_NEAR(p.at(1), 0.2, 1e-15);
    EXPECT_EQ(p.at(5), 0.0);
    EXPECT_EQ(p.at(-50), 0.9);  // before the actuals: earliest observation
}

TEST(SimulateCustomer, AlwaysAvailable) {
    const auto d = behavior(0.5, 0.5, 60);
    const auto p = AvailabilityProvider::constant(1.0);
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const auto out = simulate_customer(-3.0, p, d, rng);
        EXPECT_EQ(out.status, CustomerStatus::SuccessProblematic);
        EXPECT_EQ(out.decision_offset, -3);
        EXPECT_EQ(out.failures, 0);
    }
}

TEST(SimulateCustomer, NeverAvailableNoRetry) {
    const auto d = behavior(0.0, 0.5, 60);
    const auto p = AvailabilityProvider::constant(0.0);
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const auto out = simulate_customer(7.0, p, d, rng);
        EXPECT_EQ(out.status, CustomerStatus::Abandoned);
        EXPECT_EQ(out.decision_offset, 7);
    }
}

TEST(SimulateCustomer, RetryThenSwitchTwoMinutesLater) {
    const auto d = behavior(1.0, 1.0, 120);
    const auto p = AvailabilityProvider::constant(0.0);
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const auto out = simulate_customer(4.0, p, d, rng);
        EXPECT_EQ(out.status, CustomerStatus::SuccessOther);
        EXPECT_EQ(out.decision_offset, 6);
        EXPECT_EQ(out.failures, 1);
    }
}

TEST(SimulateCustomer, RetryCapAbandons) {
    const auto d = behavior(1.0, 0.0, 1);
    const auto p = AvailabilityProvider::constant(0.0);
    Rng rng(1);
    const auto out = simulate_customer(0.0, p, d, rng);
    EXPECT_EQ(out.status, CustomerStatus::Abandoned);
    EXPECT_EQ(out.failures, kMaxFailures);
}

TEST(SimulateCustomer, MonotoneInAvailability) {
    // Shared draws: a success at low availability must stay a success at high.
    const auto d = BehaviorDistributions::from_parameters({0.7, 0.6, 0.5}, {0.2, 0.3, 0.4}, {{30, 1}, {90, 1}});
    const auto lo = AvailabilityProvider::constant(0.35);
    const auto hi = AvailabilityProvider::constant(0.6);
    int lo_success = 0;
    int hi_success = 0;
    for (std::uint64_t s = 0; s < 5000; ++s) {
        Rng r1(s);
        Rng r2(s);
        const bool a = simulate_customer(0.0, lo, d, r1).status == CustomerStatus::SuccessProblematic;
        const bool b = simulate_customer(0.0, hi, d, r2).status == CustomerStatus::SuccessProblematic;
        if (a) {
            EXPECT_TRUE(b) << "seed " << s;
        }
        lo_success += a;
        hi_success += b;
    }
    EXPECT_LE(lo_success, hi_success);
}

TEST(SimulateWiredOn, AllSucceedInstantly) {
    const std::int64_t R = 30;
    const auto f = simulate_wiredon(flat_volume(100.0, -10, R), std::vector<double>(R, 50.0),
                                    AvailabilityProvider::constant(1.0), behavior(0.5, 0.5, 60), options(R, 3, 1));
    for (std::int64_t m = 0; m < R; ++m) {
        EXPECT_EQ(f.w_on_mean[m], 150.0);
        EXPECT_EQ(f.a_problematic[m], 100.0);
        EXPECT_EQ(f.a_other[m], 0.0);
        EXPECT_EQ(f.w_on_p10[m], 150.0);
        EXPECT_EQ(f.w_on_p90[m], 150.0);
    }
}

TEST(SimulateWiredOn, EveryoneAbandons) {
    const std::int64_t R = 20;
    std::vector<double> other(R);
    for (std::int64_t m = 0; m < R; ++m) other[m] = 40.0 + static_cast<double>(m);
    const auto f = simulate_wiredon(flat_volume(80.0, -10, R), other, AvailabilityProvider::constant(0.0),
                                    behavior(0.0, 0.5, 60), options(R, 2, 1));
    for (std::int64_t m = 0; m < R; ++m) {
        EXPECT_EQ(f.w_on_mean[m], other[m]);
        EXPECT_EQ(f.abandoned[m], 80.0);
    }
}

TEST(SimulateWiredOn, CohortShiftsOneMinute) {
    const std::int64_t R = 25;
    const auto f = simulate_wiredon(flat_volume(100.0, -10, R), std::vector<double>(R, 10.0),
                                    AvailabilityProvider::constant(0.0), behavior(1.0, 1.0, 60), options(R, 2, 5));
    for (std::int64_t m = 0; m < R; ++m) {
        EXPECT_EQ(f.a_other[m], 100.0);
        EXPECT_EQ(f.w_on_mean[m], 110.0);
    }
    for (const auto& t : f.tallies) {
        EXPECT_EQ(t.spawned, 100 * (R + 11));
        EXPECT_EQ(t.in_flight, 100);          // the last cohort lands at R+1
        EXPECT_EQ(t.before_horizon, 1000);    // cohorts -10..-1 land at -9..0
        EXPECT_TRUE(t.conserved());
    }
}

TEST(SimulateWiredOn, IdentityAndConservation) {
    const std::int64_t R = 40;
    std::vector<double> vol;
    for (MinuteOffset m = -15; m <= R; ++m) vol.push_back(30.0 + 10.0 * std::sin(0.3 * static_cast<double>(m)));
    std::vector<double> other(R, 77.5);
    const auto d = BehaviorDistributions::from_parameters({0.8, 0.6, 0.4}, {0.3, 0.5, 0.6}, {{45, 1}, {200, 1}});
    AvailabilityProvider p([](MinuteOffset m) { return std::clamp(0.9 - 0.02 * static_cast<double>(m + 15), 0.0, 1.0); });
    SimulationOptions o = options(R, 7, 99);
    o.warmup_start = -15;
    o.stochastic_rounding = true;
    const auto f = simulate_wiredon(MinuteSeries(0, -15, vol), other, p, d, o);
    for (std::int64_t m = 0; m < R; ++m) {
        EXPECT_EQ(f.w_on_mean[m], f.a_problematic[m] + f.a_other[m] + f.c_other[m]);
        EXPECT_LE(f.w_on_p10[m], f.w_on_p90[m]);
        EXPECT_GE(f.a_problematic[m], 0.0);
    }
    for (int r = 0; r < 7; ++r) {
        const auto& t = f.tallies[static_cast<std::size_t>(r)];
        EXPECT_TRUE(t.conserved());
        std::int64_t binned = 0;
        for (std::int64_t m = 1; m <= R; ++m)
            for (auto s : {CustomerStatus::SuccessProblematic, CustomerStatus::SuccessOther, CustomerStatus::Abandoned})
                binned += f.count(r, s, m);
        EXPECT_EQ(binned, t.resolved_total());
    }
}

TEST(SimulateWiredOn, ThreadCountDoesNotMatter) {
    const std::int64_t R = 30;
    const auto d = BehaviorDistributions::from_parameters({0.6, 0.5}, {0.3, 0.4}, {{30, 1}, {60, 2}, {120, 1}});
    AvailabilityProvider p([](MinuteOffset m) { return m < 0 ? 0.9 : 0.4; });
    const auto a = simulate_wiredon(flat_volume(57.3, -10, R), std::vector<double>(R, 5.0), p, d, options(R, 9, 4, 1));
    const auto b = simulate_wiredon(flat_volume(57.3, -10, R), std::vector<double>(R, 5.0), p, d, options(R, 9, 4, 8));
    EXPECT_EQ(a.w_on_mean, b.w_on_mean);
    EXPECT_EQ(a.w_on_p10, b.w_on_p10);
    EXPECT_EQ(a.decision_counts, b.decision_counts);
    const auto c = simulate_wiredon(flat_volume(57.3, -10, R), std::vector<double>(R, 5.0), p, d, options(R, 9, 5, 1));
    EXPECT_NE(a.decision_counts, c.decision_counts);
}

TEST(SimulateWiredOn, SuccessFractionConverges) {
    const std::int64_t R = 20;
    const double a = 0.37;
    const auto f = simulate_wiredon(flat_volume(500.0, -10, R), std::vector<double>(R, 0.0),
                                    AvailabilityProvider::constant(a), behavior(0.0, 0.0, 60), options(R, 40, 8));
    for (std::int64_t m = 0; m < R; ++m) {
        const double n = 500.0 * 40.0;
        EXPECT_NEAR(f.a_problematic[m] / 500.0, a, 3.0 * std::sqrt(a * (1 - a) / n));
    }
}

TEST(SimulateWiredOn, Errors) {
    const auto d = behavior(0.5, 0.5, 60);
    const auto p = AvailabilityProvider::constant(0.5);
    EXPECT_THROW(simulate_wiredon(flat_volume(1, -10, 5), {}, p, d, options(0, 1, 1)), SimulationError);
    SimulationOptions late = options(5, 1, 1);
    late.warmup_start = -5;
    EXPECT_THROW(simulate_wiredon(flat_volume(1, -10, 5), std::vector<double>(5, 0.0), p, d, late), ValidationError);
    EXPECT_THROW(simulate_wiredon(flat_volume(1, -5, 5), std::vector<double>(5, 0.0), p, d, options(5, 1, 1)),
                 AlignmentError);
}

TEST(Percentile, Interpolates) {
    EXPECT_EQ(percentile({1, 2, 3, 4, 5}, 50), 3.0);
    EXPECT_NEAR(percentile({1, 2, 3, 4, 5}, 10), 1.4, 1e-15);
    EXPECT_EQ(percentile({7}, 90), 7.0);
}
