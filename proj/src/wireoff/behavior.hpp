#pragma once

#include "wireoff/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wireoff {

enum class AttemptOutcome { Success, Failure };

struct AttemptEvent {
    std::string customer_id;
    std::int64_t timestamp_seconds = 0;
    std::string vendor_id;
    AttemptOutcome outcome = AttemptOutcome::Success;
};

/// Empirical distribution of the delay (seconds) between a failure and the
/// customer's next attempt.
class InterattemptDistribution {
public:
    InterattemptDistribution() = default;
    /// Pairs of (seconds, weight); weights are normalized. Seconds must be
    /// positive; duplicates are merged.
    explicit InterattemptDistribution(std::vector<std::pair<std::int64_t, double>> weights);

    std::span<const std::int64_t> support() const noexcept { return seconds_; }
    std::span<const double> pmf() const noexcept { return pmf_; }
    bool empty() const noexcept { return seconds_.empty(); }

    /// P(delay <= s).
    double cdf(std::int64_t s) const noexcept;
    /// P(delay >= s), the quantity the retry-time definition describes.
    double survival(std::int64_t s) const noexcept;
    /// Inverse-CDF draw.
    std::int64_t sample(Rng& rng) const noexcept;

private:
    std::vector<std::int64_t> seconds_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

/// Retry probabilities pi_k, switch probabilities rho_k (k = 1..k_max) and
/// the interattempt delay distribution for the problematic vendor.
struct BehaviorDistributions {
    std::vector<double> retry_p;   // index k-1
    std::vector<double> switch_p;  // index k-1
    InterattemptDistribution interattempt;

    int k_max_observed() const noexcept { return static_cast<int>(retry_p.size()); }
    /// pi_k; k beyond the observed range returns the last observed value.
    double retry(int k) const;
    /// rho_k with the same plateau extension.
    double switch_probability(int k) const;

    /// Validates and builds from explicit parameters.
    static BehaviorDistributions from_parameters(std::vector<double> retry_p, std::vector<double> switch_p,
                                                 std::vector<std::pair<std::int64_t, double>> interattempt);
};

struct BehaviorCounts {
    std::vector<std::int64_t> reached;   // customers reaching k consecutive failures
    std::vector<std::int64_t> retried;   // of those, made a further attempt
    std::vector<std::int64_t> switched;  // of the retries, went to another vendor
    std::int64_t gaps = 0;
};

struct EstimateOptions {
    bool smoothing = true;  // add-one (Laplace) smoothing
    /// A later event further away than this starts a new experience rather
    /// than counting as a retry.
    std::int64_t max_retry_gap_seconds = 3600;
    std::optional<std::int64_t> window_start_seconds;
    std::optional<std::int64_t> window_end_seconds;
};

struct BehaviorEstimate {
    BehaviorDistributions distributions;
    BehaviorCounts counts;
};

/// Counts retries, switches and delays after consecutive failures with the
/// problematic vendor. Consecutive-failure counting resets on success, on a
/// switch to another vendor and at experience boundaries.
BehaviorEstimate estimate_behavior(std::span<const AttemptEvent> events, const std::string& problematic_vendor,
                                   const EstimateOptions& options = {});

bool sample_retry(const BehaviorDistributions& dist, int k, Rng& rng);
bool sample_switch(const BehaviorDistributions& dist, int k, Rng& rng);
std::int64_t sample_interattempt(const BehaviorDistributions& dist, Rng& rng);

}  // namespace wireoff
