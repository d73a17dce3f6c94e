#pragma once

#include "wireoff/availability.hpp"
#include "wireoff/behavior.hpp"
#include "wireoff/series.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace wireoff {

enum class CustomerStatus { SuccessProblematic = 0, SuccessOther = 1, Abandoned = 2 };
inline constexpr std::size_t kStatusCount = 3;

struct CustomerOutcome {
    CustomerStatus status = CustomerStatus::Abandoned;
    MinuteOffset decision_offset = 0;  // floor of the decision time
    int failures = 0;
};

/// Availability of the problematic vendor by minute: actual observations for
/// offsets <= 0, the smoothing forecast (clamped) for offsets > 0.
class AvailabilityProvider {
public:
    AvailabilityProvider(AvailabilitySeries actuals, DesModel model);
    /// Arbitrary profile, used by tests and the synthetic oracle battery.
    explicit AvailabilityProvider(std::function<double(MinuteOffset)> profile);

    static AvailabilityProvider constant(double availability);

    double at(MinuteOffset m) const;

private:
    std::optional<AvailabilitySeries> actuals_;
    std::optional<DesModel> model_;
    std::function<double(MinuteOffset)> profile_;
};

inline constexpr int kMaxFailures = 15;

/// Replays the customer decision loop for one customer whose first attempt
/// with the problematic vendor happens at minute start_m.
CustomerOutcome simulate_customer(double start_m, const AvailabilityProvider& provider,
                                  const BehaviorDistributions& dist, Rng& rng);

struct SimulationOptions {
    MinuteOffset warmup_start = -10;
    std::int64_t horizon = 60;  // R
    int replications = 20;
    std::uint64_t seed = 0;
    int threads = 1;
    bool stochastic_rounding = false;
};

/// Per-replication bookkeeping for the conservation identity
/// spawned = resolved (in [1,R]) + in_flight (> R) + before_horizon (< 1).
struct ReplicationTally {
    std::int64_t spawned = 0;
    std::array<std::int64_t, kStatusCount> resolved{};
    std::int64_t in_flight = 0;
    std::int64_t before_horizon = 0;

    std::int64_t resolved_total() const noexcept { return resolved[0] + resolved[1] + resolved[2]; }
    bool conserved() const noexcept { return spawned == resolved_total() + in_flight + before_horizon; }
};

struct WiredOnForecast {
    std::int64_t horizon = 0;
    int replications = 0;
    // Per-minute series over m = 1..R (index m-1).
    std::vector<double> a_problematic;  // mean successes with the problematic vendor
    std::vector<double> a_other;        // mean switch successes
    std::vector<double> abandoned;      // mean abandonments
    std::vector<double> c_other;        // baseline of the other vendors
    std::vector<double> w_on_mean;      // a_problematic + a_other + c_other
    std::vector<double> w_on_p10;
    std::vector<double> w_on_p90;
    std::vector<ReplicationTally> tallies;

    /// Count of `status` decided in minute m during replication r.
    std::int64_t count(int replication, CustomerStatus status, std::int64_t m) const;

    /// Flattened [replication][status][minute] decision counts.
    std::vector<std::int64_t> decision_counts;
};

/// Spawns floor(volume) customers per minute over [warmup_start, R] (the
/// problematic-vendor volume series must cover that range), simulates each
/// one, bins decisions by minute and averages over replications. Customer
/// streams are keyed by (replication, spawn minute, customer index), so the
/// result does not depend on the thread count.
WiredOnForecast simulate_wiredon(const MinuteSeries& problematic_volume, std::span<const double> other_baseline,
                                 const AvailabilityProvider& provider, const BehaviorDistributions& dist,
                                 const SimulationOptions& options);

/// Linear-interpolated percentile (q in [0,100]) of a sample.
double percentile(std::vector<double> values, double q);

}  // namespace wireoff
