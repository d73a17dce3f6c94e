#include "wireoff/baseline.hpp"
#include "wireoff/behavior.hpp"
#include "wireoff/errors.hpp"
#include "wireoff/synth.hpp"
#include "wireoff/wiredoff.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace wireoff;

namespace {

Scenario small_scenario() {
    Scenario s;
    s.name = "unit";
    s.seed = 5;
    s.t0_epoch_minute = 10080 * 2900;
    s.history_minutes = 600;
    s.horizon = 30;
    s.problematic_vendor = "n0";
    VendorSpec a;
    a.id = "n0";
    a.mean_volume = 40;
    a.harmonics = {{0.2, 0.1}};
    a.noise_sd = 0.01;
    VendorSpec b;
    b.id = "other";
    b.mean_volume = 80;
    s.vendors = {a, b};
    s.availability.knots = {{-60, 0.95}, {0, 0.5}};
    s.availability_minutes = 60;
    s.behavior.retry_p = {0.6, 0.5};
    s.behavior.switch_p = {0.3, 0.4};
    s.behavior.interattempt = {{30, 1}, {90, 1}};
    s.event_minutes = 60;
    s.wireoff.start_offset = -400;
    s.wireoff.minutes = 120;
    s.actual_wireoff_m = 20;
    return s;
}

}  // namespace

TEST(Scenario, JsonRoundTrip) {
    const Scenario s = small_scenario();
    const Scenario back = scenario_from_json(scenario_to_json(s));
    EXPECT_EQ(scenario_to_json(back), scenario_to_json(s));
}

TEST(Scenario, BundledFilesLoad) {
    for (const char* name : {"crossing.json", "no_crossing.json"}) {
        const Scenario s = load_scenario(std::filesystem::path(WIREOFF_SOURCE_DIR) / "scenarios" / name);
        EXPECT_NO_THROW(s.validate());
        EXPECT_EQ(s.horizon, 60);
    }
    EXPECT_EQ(load_scenario(std::filesystem::path(WIREOFF_SOURCE_DIR) / "scenarios" / "crossing.json").actual_wireoff_m,
              35);
}

TEST(Scenario, Validation) {
    Scenario s = small_scenario();
    s.problematic_vendor = "ghost";
    EXPECT_THROW(s.validate(), ValidationError);
    s = small_scenario();
    s.behavior.retry_p = {1.2, 0.5};
    EXPECT_THROW(s.validate(), ValidationError);
    s = small_scenario();
    s.availability.knots = {{-10, 0.5}, {-20, 0.6}};
    EXPECT_THROW(s.validate(), ValidationError);
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"name", "x"}}), ValidationError);
}

TEST(Generate, Deterministic) {
    const Scenario s = small_scenario();
    const GeneratedData a = generate(s);
    const GeneratedData b = generate(s);
    EXPECT_EQ(format_volumes(a.volumes), format_volumes(b.volumes));
    EXPECT_EQ(format_availability(a.availability), format_availability(b.availability));
    EXPECT_EQ(format_events(a.events), format_events(b.events));
    EXPECT_EQ(format_wireoff_history(a.wireoff_history), format_wireoff_history(b.wireoff_history));
    EXPECT_EQ(a.truth, b.truth);
    Scenario other = s;
    other.seed = 6;
    EXPECT_NE(format_volumes(generate(other).volumes), format_volumes(a.volumes));
}

TEST(Generate, CsvRoundTripIsBitwise) {
    const GeneratedData g = generate(small_scenario());
    const VolumeTable v = parse_volumes(format_volumes(g.volumes));
    for (const auto& [id, s] : g.volumes.vendors) EXPECT_EQ(v.at(id).series, s.series);
    const AvailabilityTable a = parse_availability(format_availability(g.availability));
    EXPECT_EQ(a.at("n0").series, g.availability.at("n0").series);
    const WireoffHistory h = parse_wireoff_history(format_wireoff_history(g.wireoff_history));
    EXPECT_EQ(h.w_off, g.wireoff_history.w_off);
    EXPECT_EQ(h.c_problematic, g.wireoff_history.c_problematic);
    EXPECT_EQ(format_events(parse_events(format_events(g.events))), format_events(g.events));
}

TEST(Generate, NoiseFreeHarmonicIsRecovered) {
    Scenario s = small_scenario();
    s.history_minutes = 2 * kMinutesPerWeek;
    s.vendors[0].noise_sd = 0.0;
    s.vendors[0].harmonics = {{0.3, -0.15}};
    const GeneratedData g = generate(s);
    const auto& vol = g.volumes.at("n0").series;
    std::vector<double> centered;
    for (double v : vol.values()) centered.push_back(std::log(v) - std::log(40.0));
    SeasonalSpec spec;
    spec.harmonics = 1;
    spec.prior_scale = 1e6;
    const auto beta = fit_seasonal(MinuteSeries(vol.anchor_epoch_minute(), vol.start_offset(), centered), spec);
    EXPECT_NEAR(beta[0], 0.3, 1e-6);
    EXPECT_NEAR(beta[1], -0.15, 1e-6);
}

TEST(Generate, FullAvailabilityHasNoFailures) {
    Scenario s = small_scenario();
    s.availability.knots = {{0, 1.0}};
    for (const auto& e : generate(s).events) EXPECT_EQ(e.outcome, AttemptOutcome::Success);
}

TEST(Generate, WireoffTruthSlope) {
    Scenario s = small_scenario();
    s.wireoff.noise_relative = 0.0;
    const GeneratedData g = generate(s);
    EXPECT_NEAR(estimate_slope(g.wireoff_history).delta, 0.4, 1e-12);
}

TEST(OracleEvents, RetryFraction) {
    EventOracleInput in;
    in.first_minute = 1;
    in.last_minute = 100;
    in.availability = [](MinuteOffset) { return 0.0; };
    in.customers = [](MinuteOffset) { return std::int64_t{100}; };
    in.behavior.retry_p = {0.7};
    in.behavior.switch_p = {1.0};
    in.behavior.interattempt = {{60, 1}};
    in.seed = 9;
    const auto events = oracle_events(in);
    EstimateOptions raw;
    raw.smoothing = false;
    const auto est = estimate_behavior(events, "n0", raw);
    EXPECT_EQ(est.counts.reached[0], 10000);
    EXPECT_NEAR(est.distributions.retry(1), 0.7, 3 * std::sqrt(0.21 / 1e4));
    EXPECT_EQ(est.distributions.switch_probability(1), 1.0);
}

TEST(OracleEvents, OutcomeCounts) {
    EventOracleInput in;
    in.first_minute = 0;
    in.last_minute = 3;
    in.availability = [](MinuteOffset) { return 0.0; };
    in.customers = [](MinuteOffset) { return std::int64_t{5}; };
    in.behavior.retry_p = {1.0};
    in.behavior.switch_p = {1.0};
    in.behavior.interattempt = {{120, 1}};
    const auto counts = outcome_counts_from_events(oracle_events(in), "n0", 0, 6);
    // Every cohort switches two minutes after its first attempt.
    for (std::int64_t m = 1; m <= 6; ++m) {
        const auto& c = counts[static_cast<std::size_t>(m - 1)];
        EXPECT_EQ(c[1], (m >= 2 && m <= 5) ? 5 : 0) << m;
        EXPECT_EQ(c[0] + c[2], 0);
    }
}

TEST(WriteGenerated, Files) {
    const auto dir = std::filesystem::temp_directory_path() / "wireoff_synth_test";
    std::filesystem::remove_all(dir);
    write_generated(generate(small_scenario()), dir);
    for (const char* f : {"volumes.csv", "availability.csv", "events.csv", "wireoff_history.csv", "truth.json"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    std::filesystem::remove_all(dir);
}
