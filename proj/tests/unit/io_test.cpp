#include "wireoff/errors.hpp"
#include "wireoff/io.hpp"
#include "wireoff/random.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <tuple>

#include <unistd.h>

using namespace wireoff;

namespace {

std::string volume_rows(const std::vector<std::tuple<std::int64_t, std::string, std::string>>& rows) {
    std::string s = "timestamp_minute,vendor_id,count\n";
    for (const auto& [t, v, c] : rows) s += std::to_string(t) + "," + v + "," + c + "\n";
    return s;
}

}  // namespace

TEST(Volumes, TwoCompleteVendors) {
    std::string text = "timestamp_minute,vendor_id,count\n";
    for (int m = 0; m < 10; ++m) {
        text += std::to_string(1000 + m) + ",a," + std::to_string(10 + m) + "\n";
        text += std::to_string(1000 + m) + ",b,5.5\n";
    }
    const VolumeTable t = parse_volumes(text);
    EXPECT_EQ(t.anchor_epoch_minute, 1009);
    ASSERT_EQ(t.vendors.size(), 2u);
    EXPECT_EQ(t.at("a").series.size(), 10u);
    EXPECT_EQ(t.at("b").series.size(), 10u);
    EXPECT_EQ(t.at("a").series.start_offset(), -9);
    EXPECT_EQ(t.at("a").series.at(0), 19.0);
    EXPECT_THROW(t.at("zzz"), NotFoundError);
}

TEST(Volumes, InterpolatesShortGaps) {
    const VolumeTable t = parse_volumes(volume_rows({{1, "a", "10"}, {3, "a", "14"}}));
    EXPECT_EQ(t.at("a").series.at(-1), 12.0);
    const VolumeTable five = parse_volumes(volume_rows({{1, "a", "10"}, {7, "a", "22"}}));
    EXPECT_EQ(five.at("a").series.size(), 7u);
    EXPECT_DOUBLE_EQ(five.at("a").series.at(-3), 16.0);
}

TEST(Volumes, LongGap) {
    try {
        parse_volumes(volume_rows({{1, "a", "10"}, {8, "a", "14"}}));
        FAIL();
    } catch (const GapError& e) {
        EXPECT_EQ(e.vendor(), "a");
        EXPECT_EQ(e.first_missing(), 2);
        EXPECT_EQ(e.last_missing(), 7);
    }
}

TEST(Volumes, Malformed) {
    try {
        parse_volumes("timestamp_minute,vendor_id,count\n1,a,10\n2,a,abc\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(parse_volumes("timestamp_minute,vendor_id,count\n1,a\n"), ParseError);
    EXPECT_THROW(parse_volumes("minute,vendor,count\n1,a,3\n"), ParseError);
    EXPECT_THROW(parse_volumes("timestamp_minute,vendor_id,count\n1,a b,3\n"), ParseError);
    EXPECT_THROW(parse_volumes("timestamp_minute,vendor_id,count\n1,a,3\n1,a,4\n"), ParseError);
    EXPECT_THROW(parse_volumes("timestamp_minute,vendor_id,count\n1,a,0\n"), DomainError);
    EXPECT_THROW(parse_volumes("timestamp_minute,vendor_id,count\n"), ValidationError);
    EXPECT_THROW(parse_volumes(""), ParseError);
}

TEST(Volumes, ToleratesCrlfAndBom) {
    const VolumeTable t = parse_volumes("\xEF\xBB\xBFtimestamp_minute,vendor_id,count\r\n1,a,10\r\n2,a,11\r\n");
    EXPECT_EQ(t.at("a").series.size(), 2u);
}

TEST(Volumes, ExplicitAnchor) {
    const VolumeTable t = parse_volumes(volume_rows({{1, "a", "10"}, {2, "a", "11"}}), 10);
    EXPECT_EQ(t.at("a").series.start_offset(), -9);
}

TEST(Availability, ForwardFill) {
    const auto t = parse_availability(
        "timestamp_minute,vendor_id,availability\n1,n0,0.9\n4,n0,0.5\n");
    const auto& s = t.at("n0").series;
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[1], 0.9);
    EXPECT_EQ(s[2], 0.9);
    EXPECT_EQ(s[3], 0.5);
}

TEST(Availability, LongGapAndRange) {
    EXPECT_THROW(parse_availability("timestamp_minute,vendor_id,availability\n1,n0,0.9\n13,n0,0.5\n"),
                 ValidationError);
    EXPECT_NO_THROW(parse_availability("timestamp_minute,vendor_id,availability\n1,n0,0.9\n12,n0,0.5\n"));
    EXPECT_THROW(parse_availability("timestamp_minute,vendor_id,availability\n1,n0,1.2\n"), DomainError);
}

TEST(Events, Parse) {
    const auto ev = parse_events(
        "customer_id,timestamp_seconds,vendor_id,outcome\nc1,100,n0,failure\nc1,160,x,success\n");
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0].outcome, AttemptOutcome::Failure);
    EXPECT_EQ(ev[1].vendor_id, "x");
    EXPECT_THROW(parse_events("customer_id,timestamp_seconds,vendor_id,outcome\nc1,100,n0,maybe\n"), ParseError);
    EXPECT_EQ(format_events(ev), "customer_id,timestamp_seconds,vendor_id,outcome\nc1,100,n0,failure\nc1,160,x,success\n");
}

TEST(WireoffHistory, ParseAndGap) {
    const auto h = parse_wireoff_history("timestamp_minute,W_off,C_n0,C_other\n10,140,100,100\n11,230,50,200\n");
    EXPECT_EQ(h.w_off.anchor_epoch_minute(), 11);
    EXPECT_EQ(h.c_other.at(0), 200.0);
    EXPECT_THROW(parse_wireoff_history("timestamp_minute,W_off,C_n0,C_other\n10,1,1,1\n12,1,1,1\n"), GapError);
}

TEST(Format, RoundTripsDoublesExactly) {
    Rng rng(2);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::exp(rng.uniform(-30, 30)) * (rng.uniform() < 0.5 ? -1 : 1);
        const std::string s = format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
        EXPECT_LE(s.size(), 24u);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Format, VolumesRoundTrip) {
    Rng rng(3);
    VolumeTable t;
    t.anchor_epoch_minute = 5000;
    for (const std::string v : {"a", "b"}) {
        std::vector<double> vals(50);
        for (double& x : vals) x = std::exp(rng.uniform(0, 8));
        t.vendors.emplace(v, VolumeSeries(v, MinuteSeries(5000, -49, vals)));
    }
    const VolumeTable back = parse_volumes(format_volumes(t));
    EXPECT_EQ(back.anchor_epoch_minute, t.anchor_epoch_minute);
    for (const auto& [id, s] : t.vendors) EXPECT_EQ(back.at(id).series, s.series);
}

TEST(Files, AtomicWriteAndMissingRead) {
    const auto dir = std::filesystem::temp_directory_path() / ("wireoff_io_test_" + std::to_string(::getpid()));
    const auto path = dir / "nested" / "x.txt";
    write_file_atomic(path, "hello\n");
    EXPECT_EQ(read_file(path), "hello\n");
    write_file_atomic(path, "again\n");
    EXPECT_EQ(read_file(path), "again\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "nested")) ++entries;
    EXPECT_EQ(entries, 1u);
    std::filesystem::remove_all(dir);
    try {
        read_file(dir / "missing.csv");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
    }
}
