#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"
#include "wireoff/series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace wireoff;

TEST(TimeIndex, EpochRoundTrip) {
    for (std::int64_t anchor : {0LL, 29232600LL, -5LL}) {
        for (std::int64_t e : {anchor - 1000, anchor, anchor + 7}) {
            const TimeIndex t = TimeIndex::from_epoch(anchor, e);
            EXPECT_EQ(t.epoch_minute(), e);
            EXPECT_EQ(t.offset, e - anchor);
        }
    }
}

TEST(MinuteSeries, Bounds) {
    MinuteSeries s(100, -3, {1, 2, 3, 4});
    EXPECT_EQ(s.start_offset(), -3);
    EXPECT_EQ(s.end_offset(), 0);
    EXPECT_DOUBLE_EQ(s.at(-1), 3.0);
    EXPECT_THROW(s.at(1), AlignmentError);
    EXPECT_THROW(s.slice(-5, 0), AlignmentError);
    const MinuteSeries r = s.reanchored(97);
    EXPECT_EQ(r.start_offset(), 0);
    EXPECT_DOUBLE_EQ(r.at(2), 3.0);
    EXPECT_EQ(r.anchored_at_end(), s);
}

TEST(ToLog, ConstantOne) {
    const MinuteSeries out = to_log(MinuteSeries(0, -4, std::vector<double>(5, 1.0)));
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(ToLog, PowersOfE) {
    const MinuteSeries out = to_log(MinuteSeries(0, 0, {std::exp(1.0), std::exp(2.0)}));
    EXPECT_NEAR(out[0], 1.0, 1e-15);
    EXPECT_NEAR(out[1], 2.0, 1e-15);
}

TEST(ToLog, ZeroNamesOffset) {
    try {
        to_log(MinuteSeries(0, -2, {1.0, 0.0, 2.0}));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos) << e.what();
    }
}

TEST(ToLog, ExpRoundTrip) {
    Rng rng(3);
    std::vector<double> v(200);
    for (double& x : v) x = rng.uniform(-20.0, 20.0);
    const MinuteSeries s(5, -199, v);
    const MinuteSeries back = to_log(exp_series(s));
    for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_NEAR(back[i], v[i], 1e-12 * std::max(1.0, std::abs(v[i])));
    }
}

TEST(Align, Intersection) {
    const MinuteSeries a(0, -10, std::vector<double>(11, 1.0));
    const MinuteSeries b(0, -5, std::vector<double>(11, 2.0));
    const auto [x, y] = align(a, b);
    EXPECT_EQ(x.start_offset(), -5);
    EXPECT_EQ(x.end_offset(), 0);
    EXPECT_EQ(y.start_offset(), -5);
    EXPECT_EQ(y.end_offset(), 0);
}

TEST(Align, IdenticalUnchanged) {
    const MinuteSeries a(0, -3, {1, 2, 3, 4});
    const auto [x, y] = align(a, a);
    EXPECT_EQ(x, a);
    EXPECT_EQ(y, a);
}

TEST(Align, Disjoint) {
    const MinuteSeries a(0, -10, std::vector<double>(5, 1.0));
    const MinuteSeries b(0, 0, std::vector<double>(6, 1.0));
    EXPECT_THROW(align(a, b), AlignmentError);
}

TEST(Align, IdempotentAndCommutative) {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s1 = rng.uniform_int(-50, 0);
        const auto s2 = rng.uniform_int(-50, 0);
        const MinuteSeries a(0, s1, std::vector<double>(static_cast<std::size_t>(rng.uniform_int(60, 80)), 1.0));
        const MinuteSeries b(0, s2, std::vector<double>(static_cast<std::size_t>(rng.uniform_int(60, 80)), 2.0));
        const auto [x, y] = align(a, b);
        const auto [y2, x2] = align(b, a);
        EXPECT_EQ(x, x2);
        EXPECT_EQ(y, y2);
        const auto [x3, y3] = align(x, y);
        EXPECT_EQ(x3, x);
        EXPECT_EQ(y3, y);
    }
}

TEST(VolumeSeries, RejectsNonPositive) {
    EXPECT_THROW(VolumeSeries("v", MinuteSeries(0, 0, {1.0, -1.0})), DomainError);
}

TEST(AvailabilitySeries, RejectsOutOfRange) {
    EXPECT_THROW(AvailabilitySeries("v", MinuteSeries(0, 0, {0.5, 1.5})), DomainError);
    EXPECT_NO_THROW(AvailabilitySeries("v", MinuteSeries(0, 0, {0.0, 1.0})));
}

TEST(DeriveSeed, DistinctStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 20; ++r)
        for (std::uint64_t m = 0; m < 50; ++m) seen.insert(derive_seed(7, {r, m}));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(derive_seed(7, "fit"), derive_seed(7, "simulation"));
    EXPECT_EQ(derive_seed(7, "fit"), derive_seed(7, "fit"));
}
