#include "wireoff/behavior.hpp"

#include "wireoff/errors.hpp"

#include <algorithm>
#include <map>

namespace wireoff {

InterattemptDistribution::InterattemptDistribution(std::vector<std::pair<std::int64_t, double>> weights) {
    std::map<std::int64_t, double> merged;
    for (const auto& [s, w] : weights) {
        if (s <= 0) throw ValidationError("interattempt delays must be positive seconds");
        if (!(w >= 0.0)) throw ValidationError("interattempt weights must be non-negative");
        merged[s] += w;
    }
    double total = 0.0;
    for (const auto& [s, w] : merged) total += w;
    if (!(total > 0.0)) throw ValidationError("interattempt distribution has no mass");
    double running = 0.0;
    for (const auto& [s, w] : merged) {
        if (w == 0.0) continue;
        seconds_.push_back(s);
        pmf_.push_back(w / total);
        running += w;
        cdf_.push_back(running / total);
    }
    cdf_.back() = 1.0;
}

double InterattemptDistribution::cdf(std::int64_t s) const noexcept {
    auto it = std::upper_bound(seconds_.begin(), seconds_.end(), s);
    if (it == seconds_.begin()) return 0.0;
    return cdf_[static_cast<std::size_t>(it - seconds_.begin()) - 1];
}

double InterattemptDistribution::survival(std::int64_t s) const noexcept { return 1.0 - cdf(s - 1); }

std::int64_t InterattemptDistribution::sample(Rng& rng) const noexcept {
    const double u = rng.uniform();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return seconds_[static_cast<std::size_t>(it - cdf_.begin())];
}

double BehaviorDistributions::retry(int k) const {
    if (k < 1) throw ValidationError("failure count must be >= 1");
    if (retry_p.empty()) throw EstimationError("retry distribution is empty");
    return retry_p[static_cast<std::size_t>(std::min(k, k_max_observed()) - 1)];
}

double BehaviorDistributions::switch_probability(int k) const {
    if (k < 1) throw ValidationError("failure count must be >= 1");
    if (switch_p.empty()) throw EstimationError("switch distribution is empty");
    return switch_p[static_cast<std::size_t>(std::min(k, static_cast<int>(switch_p.size())) - 1)];
}

BehaviorDistributions BehaviorDistributions::from_parameters(
    std::vector<double> retry_p, std::vector<double> switch_p,
    std::vector<std::pair<std::int64_t, double>> interattempt) {
    if (retry_p.empty() || retry_p.size() != switch_p.size()) {
        throw ValidationError("retry and switch probabilities must be non-empty and of equal length");
    }
    for (double p : retry_p) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("retry probability outside [0,1]");
    }
    for (double p : switch_p) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("switch probability outside [0,1]");
    }
    BehaviorDistributions d;
    d.retry_p = std::move(retry_p);
    d.switch_p = std::move(switch_p);
    d.interattempt = InterattemptDistribution(std::move(interattempt));
    return d;
}

BehaviorEstimate estimate_behavior(std::span<const AttemptEvent> events, const std::string& problematic_vendor,
                                   const EstimateOptions& options) {
    // Group by customer; stable sort keeps file order for equal timestamps.
    std::map<std::string, std::vector<const AttemptEvent*>> by_customer;
    for (const auto& e : events) {
        if (options.window_start_seconds && e.timestamp_seconds < *options.window_start_seconds) continue;
        if (options.window_end_seconds && e.timestamp_seconds > *options.window_end_seconds) continue;
        by_customer[e.customer_id].push_back(&e);
    }

    BehaviorCounts counts;
    std::map<std::int64_t, double> gaps;
    auto bump = [](std::vector<std::int64_t>& v, int k) {
        if (static_cast<int>(v.size()) < k) v.resize(static_cast<std::size_t>(k), 0);
        ++v[static_cast<std::size_t>(k - 1)];
    };

    for (auto& [customer, list] : by_customer) {
        std::stable_sort(list.begin(), list.end(), [](const AttemptEvent* a, const AttemptEvent* b) {
            return a->timestamp_seconds < b->timestamp_seconds;
        });
        int k = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const AttemptEvent& e = *list[i];
            if (i > 0 && e.timestamp_seconds - list[i - 1]->timestamp_seconds > options.max_retry_gap_seconds) k = 0;
            if (e.vendor_id != problematic_vendor || e.outcome == AttemptOutcome::Success) {
                k = 0;
                continue;
            }
            ++k;
            bump(counts.reached, k);
            if (i + 1 >= list.size()) continue;
            const AttemptEvent& next = *list[i + 1];
            const std::int64_t gap = next.timestamp_seconds - e.timestamp_seconds;
            if (gap > options.max_retry_gap_seconds) continue;
            bump(counts.retried, k);
            gaps[std::max<std::int64_t>(gap, 1)] += 1.0;
            ++counts.gaps;
            if (next.vendor_id != problematic_vendor) bump(counts.switched, k);
        }
    }

    if (counts.reached.empty()) {
        throw EstimationError("no failures with vendor '" + problematic_vendor + "' in the event log");
    }
    if (gaps.empty()) {
        throw EstimationError("no retries after failures with vendor '" + problematic_vendor +
                              "'; interattempt distribution undefined");
    }
    const std::size_t kmax = counts.reached.size();
    counts.retried.resize(kmax, 0);
    counts.switched.resize(kmax, 0);

    BehaviorEstimate out;
    out.counts = counts;
    auto& dist = out.distributions;
    const double add = options.smoothing ? 1.0 : 0.0;
    for (std::size_t i = 0; i < kmax; ++i) {
        const auto reached = static_cast<double>(counts.reached[i]);
        const auto retried = static_cast<double>(counts.retried[i]);
        const auto switched = static_cast<double>(counts.switched[i]);
        dist.retry_p.push_back((retried + add) / (reached + 2.0 * add));
        if (retried + 2.0 * add > 0.0) {
            dist.switch_p.push_back((switched + add) / (retried + 2.0 * add));
        } else {
            // No retries at this depth in raw mode: carry the previous depth.
            dist.switch_p.push_back(dist.switch_p.empty() ? 0.0 : dist.switch_p.back());
        }
    }
    std::vector<std::pair<std::int64_t, double>> weights(gaps.begin(), gaps.end());
    dist.interattempt = InterattemptDistribution(std::move(weights));
    return out;
}

bool sample_retry(const BehaviorDistributions& dist, int k, Rng& rng) { return rng.uniform() < dist.retry(k); }

bool sample_switch(const BehaviorDistributions& dist, int k, Rng& rng) {
    return rng.uniform() < dist.switch_probability(k);
}

std::int64_t sample_interattempt(const BehaviorDistributions& dist, Rng& rng) { return dist.interattempt.sample(rng); }

}  // namespace wireoff
