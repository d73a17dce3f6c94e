#include "wireoff/wiredon.hpp"

#include "wireoff/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace wireoff {

AvailabilityProvider::AvailabilityProvider(AvailabilitySeries actuals, DesModel model)
    : actuals_(std::move(actuals)), model_(model) {
    if (actuals_->series.empty()) throw ValidationError("availability actuals are empty");
}

AvailabilityProvider::AvailabilityProvider(std::function<double(MinuteOffset)> profile)
    : profile_(std::move(profile)) {}

AvailabilityProvider AvailabilityProvider::constant(double availability) {
    if (!(availability >= 0.0 && availability <= 1.0)) throw ValidationError("availability outside [0,1]");
    return AvailabilityProvider([availability](MinuteOffset) { return availability; });
}

double AvailabilityProvider::at(MinuteOffset m) const {
    if (profile_) return std::clamp(profile_(m), 0.0, 1.0);
    if (m <= 0) {
        const auto& s = actuals_->series;
        // Before the first observation, hold the earliest value.
        const MinuteOffset clamped = std::clamp(m, s.start_offset(), std::min<MinuteOffset>(0, s.end_offset()));
        return s.at(clamped);
    }
    return des_forecast(*model_, m);
}

CustomerOutcome simulate_customer(double start_m, const AvailabilityProvider& provider,
                                  const BehaviorDistributions& dist, Rng& rng) {
    // Elapsed delay is kept in whole seconds so minute boundaries are exact.
    std::int64_t elapsed_seconds = 0;
    auto current_minute = [&] {
        return static_cast<MinuteOffset>(std::floor((start_m * 60.0 + static_cast<double>(elapsed_seconds)) / 60.0));
    };
    int k = 0;
    while (k <= kMaxFailures) {
        if (rng.uniform() <= provider.at(current_minute())) {
            return {CustomerStatus::SuccessProblematic, current_minute(), k};
        }
        ++k;
        if (rng.uniform() >= dist.retry(k) || k == kMaxFailures) {
            return {CustomerStatus::Abandoned, current_minute(), k};
        }
        elapsed_seconds += sample_interattempt(dist, rng);
        if (rng.uniform() <= dist.switch_probability(k)) {
            return {CustomerStatus::SuccessOther, current_minute(), k};
        }
    }
    return {CustomerStatus::Abandoned, current_minute(), k};
}

std::int64_t WiredOnForecast::count(int replication, CustomerStatus status, std::int64_t m) const {
    const auto idx = (static_cast<std::size_t>(replication) * kStatusCount + static_cast<std::size_t>(status)) *
                         static_cast<std::size_t>(horizon) +
                     static_cast<std::size_t>(m - 1);
    return decision_counts.at(idx);
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw ValidationError("percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

void run_replication(int rep, const MinuteSeries& volume, const AvailabilityProvider& provider,
                     const BehaviorDistributions& dist, const SimulationOptions& opt, ReplicationTally& tally,
                     std::int64_t* bins) {
    const std::int64_t R = opt.horizon;
    const auto rep_key = static_cast<std::uint64_t>(rep);
    for (MinuteOffset m = opt.warmup_start; m <= R; ++m) {
        const double expected = volume.at(m);
        auto customers = static_cast<std::int64_t>(std::floor(expected));
        if (opt.stochastic_rounding) {
            Rng extra(derive_seed(opt.seed, {rep_key, static_cast<std::uint64_t>(m), ~0ULL}));
            if (extra.uniform() < expected - std::floor(expected)) ++customers;
        }
        for (std::int64_t i = 0; i < customers; ++i) {
            Rng rng(derive_seed(opt.seed, {rep_key, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(i)}));
            const CustomerOutcome out = simulate_customer(static_cast<double>(m), provider, dist, rng);
            ++tally.spawned;
            if (out.decision_offset < 1) {
                ++tally.before_horizon;
            } else if (out.decision_offset > R) {
                ++tally.in_flight;
            } else {
                const auto s = static_cast<std::size_t>(out.status);
                ++tally.resolved[s];
                ++bins[s * static_cast<std::size_t>(R) + static_cast<std::size_t>(out.decision_offset - 1)];
            }
        }
    }
}

}  // namespace

WiredOnForecast simulate_wiredon(const MinuteSeries& problematic_volume, std::span<const double> other_baseline,
                                 const AvailabilityProvider& provider, const BehaviorDistributions& dist,
                                 const SimulationOptions& opt) {
    if (opt.horizon < 1) throw SimulationError("simulation horizon is empty");
    if (opt.warmup_start > -10) throw ValidationError("warm-up must start at or before offset -10");
    if (opt.replications < 1) throw ValidationError("replications must be >= 1");
    if (!problematic_volume.contains(opt.warmup_start) || !problematic_volume.contains(opt.horizon)) {
        throw AlignmentError("problematic-vendor volume must cover [" + std::to_string(opt.warmup_start) + ", " +
                             std::to_string(opt.horizon) + "]");
    }
    if (other_baseline.size() != static_cast<std::size_t>(opt.horizon)) {
        throw AlignmentError("other-vendor baseline must have one value per horizon minute");
    }
    for (MinuteOffset m = opt.warmup_start; m <= opt.horizon; ++m) {
        const double v = problematic_volume.at(m);
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("spawn volume must be finite and non-negative");
    }

    const std::int64_t R = opt.horizon;
    const int reps = opt.replications;
    WiredOnForecast out;
    out.horizon = R;
    out.replications = reps;
    out.tallies.resize(static_cast<std::size_t>(reps));
    const std::size_t per_rep = kStatusCount * static_cast<std::size_t>(R);
    out.decision_counts.assign(per_rep * static_cast<std::size_t>(reps), 0);

    const int threads = std::max(1, std::min(opt.threads, reps));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1)) {
            run_replication(rep, problematic_volume, provider, dist, opt, out.tallies[static_cast<std::size_t>(rep)],
                            out.decision_counts.data() + per_rep * static_cast<std::size_t>(rep));
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const auto Rz = static_cast<std::size_t>(R);
    out.a_problematic.assign(Rz, 0.0);
    out.a_other.assign(Rz, 0.0);
    out.abandoned.assign(Rz, 0.0);
    out.c_other.assign(other_baseline.begin(), other_baseline.end());
    out.w_on_mean.assign(Rz, 0.0);
    out.w_on_p10.assign(Rz, 0.0);
    out.w_on_p90.assign(Rz, 0.0);
    std::vector<double> per_rep_won(static_cast<std::size_t>(reps));
    for (std::size_t j = 0; j < Rz; ++j) {
        std::int64_t sp = 0, so = 0, ab = 0;
        for (int rep = 0; rep < reps; ++rep) {
            const std::int64_t* bins = out.decision_counts.data() + per_rep * static_cast<std::size_t>(rep);
            const std::int64_t rsp = bins[j];
            const std::int64_t rso = bins[Rz + j];
            sp += rsp;
            so += rso;
            ab += bins[2 * Rz + j];
            per_rep_won[static_cast<std::size_t>(rep)] = static_cast<double>(rsp + rso) + out.c_other[j];
        }
        out.a_problematic[j] = static_cast<double>(sp) / reps;
        out.a_other[j] = static_cast<double>(so) / reps;
        out.abandoned[j] = static_cast<double>(ab) / reps;
        out.w_on_mean[j] = out.a_problematic[j] + out.a_other[j] + out.c_other[j];
        out.w_on_p10[j] = percentile(per_rep_won, 10.0);
        out.w_on_p90[j] = percentile(per_rep_won, 90.0);
    }
    return out;
}

}  // namespace wireoff
