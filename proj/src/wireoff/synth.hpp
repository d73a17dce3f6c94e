#pragma once

#include "wireoff/behavior.hpp"
#include "wireoff/io.hpp"
#include "wireoff/series.hpp"
#include "wireoff/wiredoff.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace wireoff {

struct VendorSpec {
    std::string id;
    double mean_volume = 100.0;
    /// (cos, sin) coefficient pairs for harmonics 1..H of the weekly period,
    /// in log space.
    std::vector<std::pair<double, double>> harmonics;
    double trend_slope = 0.0;  // log growth per minute at the start of history
    /// (offset, slope change) pairs; the trend stays continuous at each one.
    std::vector<std::pair<MinuteOffset, double>> changepoints;
    double noise_sd = 0.0;  // Gaussian noise in log space
};

/// Piecewise-linear availability through (offset, value) knots, held flat
/// outside the first and last knot.
struct AvailabilityProfile {
    std::vector<std::pair<MinuteOffset, double>> knots;
    double noise_sd = 0.0;

    double at(double m) const;
};

struct BehaviorTruth {
    std::vector<double> retry_p;
    std::vector<double> switch_p;
    std::vector<std::pair<std::int64_t, double>> interattempt;  // (seconds, weight)

    double retry(int k) const;
    double switch_probability(int k) const;
};

struct WireoffSpec {
    double delta = 0.4;
    double noise_relative = 0.01;
    MinuteOffset start_offset = -20160;  // first minute of the historical wire-off
    std::int64_t minutes = 120;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    std::int64_t t0_epoch_minute = 0;
    std::int64_t history_minutes = 20160;
    std::int64_t horizon = 60;
    std::string problematic_vendor;
    std::vector<VendorSpec> vendors;
    AvailabilityProfile availability;
    std::int64_t availability_minutes = 120;  // rows written, ending at t0
    BehaviorTruth behavior;
    std::int64_t event_minutes = 120;         // event window, ending at t0
    double event_customer_fraction = 1.0;     // share of the volume simulated as events
    WireoffSpec wireoff;
    std::int64_t actual_wireoff_m = 0;        // scripted operator action

    /// Throws ValidationError on out-of-range truth parameters.
    void validate() const;
    const VendorSpec& problematic() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

/// Noise-free log baseline of a vendor at offset m (relative to t0).
double true_log_baseline(const VendorSpec& v, std::int64_t t0_epoch_minute, MinuteOffset m);

struct GeneratedData {
    VolumeTable volumes;
    AvailabilityTable availability;
    std::vector<AttemptEvent> events;
    WireoffHistory wireoff_history;
    nlohmann::json truth;
};

/// Volumes are exp(seasonal + trend + noise); availability follows the
/// profile; events replay the true behavior process customer by customer.
GeneratedData generate(const Scenario& scenario);

/// Writes volumes.csv, availability.csv, events.csv, wireoff_history.csv and
/// truth.json into `dir`.
void write_generated(const GeneratedData& data, const std::filesystem::path& dir);

// Straight-line event generator, deliberately sharing no code with the
// wired-on simulator so the two can be checked against each other.

struct EventOracleInput {
    std::string problematic_vendor = "n0";
    std::string other_vendor = "other";
    std::int64_t t0_epoch_minute = 0;
    MinuteOffset first_minute = -10;
    MinuteOffset last_minute = 60;
    std::function<double(MinuteOffset)> availability;  // by whole minute
    std::function<std::int64_t(MinuteOffset)> customers;  // spawned per minute
    BehaviorTruth behavior;
    std::uint64_t seed = 0;
    std::string customer_prefix = "c";
};

std::vector<AttemptEvent> oracle_events(const EventOracleInput& input);

/// Final status counts read back from an event log, binned by the minute of
/// the deciding event over offsets [1, horizon]: index 0 = success with the
/// problematic vendor, 1 = success elsewhere, 2 = abandoned.
std::vector<std::array<std::int64_t, 3>> outcome_counts_from_events(const std::vector<AttemptEvent>& events,
                                                                    const std::string& problematic_vendor,
                                                                    std::int64_t t0_epoch_minute,
                                                                    std::int64_t horizon);

}  // namespace wireoff
