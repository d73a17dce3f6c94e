#include "wireoff/synth.hpp"

#include "wireoff/errors.hpp"
#include "wireoff/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace wireoff {

using nlohmann::json;

double AvailabilityProfile::at(double m) const {
    if (knots.empty()) return 1.0;
    if (m <= static_cast<double>(knots.front().first)) return knots.front().second;
    if (m >= static_cast<double>(knots.back().first)) return knots.back().second;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const auto [x1, y1] = knots[i];
        if (m <= static_cast<double>(x1)) {
            const auto [x0, y0] = knots[i - 1];
            const double w = (m - static_cast<double>(x0)) / static_cast<double>(x1 - x0);
            return y0 + w * (y1 - y0);
        }
    }
    return knots.back().second;
}

double BehaviorTruth::retry(int k) const {
    return retry_p[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(retry_p.size())) - 1)];
}

double BehaviorTruth::switch_probability(int k) const {
    return switch_p[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(switch_p.size())) - 1)];
}

void Scenario::validate() const {
    if (vendors.empty()) throw ValidationError("scenario has no vendors");
    int matches = 0;
    for (const auto& v : vendors) {
        if (v.id == problematic_vendor) ++matches;
        if (!(v.mean_volume > 0.0)) throw ValidationError("vendor '" + v.id + "' needs a positive mean volume");
        if (!(v.noise_sd >= 0.0)) throw ValidationError("vendor '" + v.id + "' has negative noise");
    }
    if (matches != 1) throw ValidationError("scenario needs exactly one problematic vendor among its vendors");
    if (vendors.size() < 2) throw ValidationError("scenario needs at least one vendor besides the problematic one");
    if (history_minutes < 2) throw ValidationError("history must span at least 2 minutes");
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    for (std::size_t i = 0; i < availability.knots.size(); ++i) {
        const double a = availability.knots[i].second;
        if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("availability knots must lie in [0,1]");
        if (i > 0 && availability.knots[i].first <= availability.knots[i - 1].first) {
            throw ValidationError("availability knots must have increasing offsets");
        }
    }
    if (availability_minutes < 1 || availability_minutes > history_minutes) {
        throw ValidationError("availability window must lie within the history");
    }
    if (behavior.retry_p.empty() || behavior.retry_p.size() != behavior.switch_p.size()) {
        throw ValidationError("behavior truth needs equal-length, non-empty retry and switch probabilities");
    }
    for (double p : behavior.retry_p) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("retry probability outside [0,1]");
    }
    for (double p : behavior.switch_p) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("switch probability outside [0,1]");
    }
    if (behavior.interattempt.empty()) throw ValidationError("behavior truth needs an interattempt distribution");
    for (const auto& [s, w] : behavior.interattempt) {
        if (s <= 0 || !(w >= 0.0)) throw ValidationError("interattempt entries need positive seconds, weights >= 0");
    }
    if (event_minutes < 1 || !(event_customer_fraction > 0.0 && event_customer_fraction <= 1.0)) {
        throw ValidationError("event window must be >= 1 minute with a customer fraction in (0,1]");
    }
    if (wireoff.minutes < 3 || !(wireoff.noise_relative >= 0.0)) {
        throw ValidationError("wire-off history needs >= 3 minutes and non-negative noise");
    }
    if (wireoff.start_offset + wireoff.minutes - 1 > 0) throw ValidationError("wire-off history must end by t0");
}

const VendorSpec& Scenario::problematic() const {
    for (const auto& v : vendors) {
        if (v.id == problematic_vendor) return v;
    }
    throw ValidationError("problematic vendor '" + problematic_vendor + "' is not listed");
}

namespace {

std::vector<std::pair<MinuteOffset, double>> pairs_from(const json& arr) {
    std::vector<std::pair<MinuteOffset, double>> out;
    for (const auto& p : arr) out.emplace_back(p.at(0).get<MinuteOffset>(), p.at(1).get<double>());
    return out;
}

Scenario parse_scenario(const json& j) {
    Scenario s;
    s.name = j.value("name", "scenario");
    s.seed = j.value("seed", std::uint64_t{0});
    s.t0_epoch_minute = j.at("t0_epoch_minute").get<std::int64_t>();
    s.history_minutes = j.value("history_minutes", s.history_minutes);
    s.horizon = j.value("horizon", s.horizon);
    s.problematic_vendor = j.at("problematic_vendor").get<std::string>();
    for (const auto& v : j.at("vendors")) {
        VendorSpec spec;
        spec.id = v.at("id").get<std::string>();
        spec.mean_volume = v.at("mean_volume").get<double>();
        for (const auto& h : v.value("harmonics", json::array())) {
            spec.harmonics.emplace_back(h.at(0).get<double>(), h.at(1).get<double>());
        }
        const json trend = v.value("trend", json::object());
        spec.trend_slope = trend.value("slope", 0.0);
        if (trend.contains("changepoints")) spec.changepoints = pairs_from(trend.at("changepoints"));
        spec.noise_sd = v.value("noise_sd", 0.0);
        s.vendors.push_back(std::move(spec));
    }
    const json& av = j.at("availability");
    s.availability.knots = pairs_from(av.at("knots"));
    s.availability.noise_sd = av.value("noise_sd", 0.0);
    s.availability_minutes = av.value("minutes", s.availability_minutes);
    const json& b = j.at("behavior");
    s.behavior.retry_p = b.at("retry_p").get<std::vector<double>>();
    s.behavior.switch_p = b.at("switch_p").get<std::vector<double>>();
    for (const auto& p : b.at("interattempt_pmf")) {
        s.behavior.interattempt.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<double>());
    }
    const json ev = j.value("events", json::object());
    s.event_minutes = ev.value("minutes", s.event_minutes);
    s.event_customer_fraction = ev.value("customer_fraction", s.event_customer_fraction);
    const json wo = j.value("wireoff", json::object());
    s.wireoff.delta = wo.value("delta", s.wireoff.delta);
    s.wireoff.noise_relative = wo.value("noise_relative", s.wireoff.noise_relative);
    s.wireoff.start_offset = wo.value("start_offset", s.wireoff.start_offset);
    s.wireoff.minutes = wo.value("minutes", s.wireoff.minutes);
    s.actual_wireoff_m = j.value("actual_wireoff_m", std::int64_t{0});
    s.validate();
    return s;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    try {
        return parse_scenario(j);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
}

json scenario_to_json(const Scenario& s) {
    json vendors = json::array();
    for (const auto& v : s.vendors) {
        json h = json::array();
        for (const auto& [c, sn] : v.harmonics) h.push_back({c, sn});
        json cps = json::array();
        for (const auto& [o, d] : v.changepoints) cps.push_back({o, d});
        vendors.push_back({{"id", v.id},
                           {"mean_volume", v.mean_volume},
                           {"harmonics", h},
                           {"trend", {{"slope", v.trend_slope}, {"changepoints", cps}}},
                           {"noise_sd", v.noise_sd}});
    }
    json knots = json::array();
    for (const auto& [o, a] : s.availability.knots) knots.push_back({o, a});
    json pmf = json::array();
    for (const auto& [sec, w] : s.behavior.interattempt) pmf.push_back({sec, w});
    return json{{"name", s.name},
                {"seed", s.seed},
                {"t0_epoch_minute", s.t0_epoch_minute},
                {"history_minutes", s.history_minutes},
                {"horizon", s.horizon},
                {"problematic_vendor", s.problematic_vendor},
                {"vendors", vendors},
                {"availability", {{"knots", knots}, {"noise_sd", s.availability.noise_sd}, {"minutes", s.availability_minutes}}},
                {"behavior", {{"retry_p", s.behavior.retry_p}, {"switch_p", s.behavior.switch_p}, {"interattempt_pmf", pmf}}},
                {"events", {{"minutes", s.event_minutes}, {"customer_fraction", s.event_customer_fraction}}},
                {"wireoff",
                 {{"delta", s.wireoff.delta},
                  {"noise_relative", s.wireoff.noise_relative},
                  {"start_offset", s.wireoff.start_offset},
                  {"minutes", s.wireoff.minutes}}},
                {"actual_wireoff_m", s.actual_wireoff_m}};
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("scenario '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const ValidationError& e) {
        throw ValidationError("'" + path.string() + "': " + e.what());
    }
}

double true_log_baseline(const VendorSpec& v, std::int64_t t0_epoch_minute, MinuteOffset m) {
    // Weekly phase follows the wall clock, reduced exactly in integers.
    const std::int64_t phase = ((t0_epoch_minute + m) % 10080 + 10080) % 10080;
    double value = std::log(v.mean_volume);
    for (std::size_t i = 0; i < v.harmonics.size(); ++i) {
        const auto h = static_cast<std::int64_t>(i + 1);
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((h * phase) % 10080) / 10080.0;
        value += v.harmonics[i].first * std::cos(angle) + v.harmonics[i].second * std::sin(angle);
    }
    value += v.trend_slope * static_cast<double>(m);
    for (const auto& [u, d] : v.changepoints) {
        if (m > u) value += d * static_cast<double>(m - u);
    }
    return value;
}

std::vector<AttemptEvent> oracle_events(const EventOracleInput& in) {
    std::mt19937_64 engine(in.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weights;
    std::vector<std::int64_t> delays;
    for (const auto& [s, w] : in.behavior.interattempt) {
        delays.push_back(s);
        weights.push_back(w);
    }
    std::discrete_distribution<std::size_t> delay_index(weights.begin(), weights.end());

    std::vector<AttemptEvent> events;
    for (MinuteOffset minute = in.first_minute; minute <= in.last_minute; ++minute) {
        const std::int64_t n = in.customers(minute);
        for (std::int64_t c = 0; c < n; ++c) {
            const std::string id = in.customer_prefix + std::to_string(minute) + "_" + std::to_string(c);
            std::int64_t second = (in.t0_epoch_minute + minute) * 60;
            int failures = 0;
            for (;;) {
                const std::int64_t epoch_minute = second >= 0 ? second / 60 : -((-second + 59) / 60);
                const double a = in.availability(epoch_minute - in.t0_epoch_minute);
                if (unit(engine) < a) {
                    events.push_back({id, second, in.problematic_vendor, AttemptOutcome::Success});
                    break;
                }
                events.push_back({id, second, in.problematic_vendor, AttemptOutcome::Failure});
                ++failures;
                const bool gives_up = unit(engine) >= in.behavior.retry(failures);
                if (gives_up || failures == 15) break;
                second += delays[delay_index(engine)];
                if (unit(engine) < in.behavior.switch_probability(failures)) {
                    events.push_back({id, second, in.other_vendor, AttemptOutcome::Success});
                    break;
                }
            }
        }
    }
    return events;
}

std::vector<std::array<std::int64_t, 3>> outcome_counts_from_events(const std::vector<AttemptEvent>& events,
                                                                    const std::string& problematic_vendor,
                                                                    std::int64_t t0_epoch_minute,
                                                                    std::int64_t horizon) {
    std::map<std::string, const AttemptEvent*> last;
    for (const auto& e : events) {
        auto& slot = last[e.customer_id];
        if (slot == nullptr || e.timestamp_seconds >= slot->timestamp_seconds) slot = &e;
    }
    std::vector<std::array<std::int64_t, 3>> counts(static_cast<std::size_t>(horizon), {0, 0, 0});
    for (const auto& [id, e] : last) {
        const std::int64_t s = e->timestamp_seconds;
        const std::int64_t epoch_minute = s >= 0 ? s / 60 : -((-s + 59) / 60);
        const std::int64_t m = epoch_minute - t0_epoch_minute;
        if (m < 1 || m > horizon) continue;
        std::size_t category = 2;
        if (e->outcome == AttemptOutcome::Success) category = e->vendor_id == problematic_vendor ? 0 : 1;
        ++counts[static_cast<std::size_t>(m - 1)][category];
    }
    return counts;
}

GeneratedData generate(const Scenario& s) {
    s.validate();
    GeneratedData out;
    const std::int64_t t0 = s.t0_epoch_minute;
    const MinuteOffset first = -(s.history_minutes - 1);

    out.volumes.anchor_epoch_minute = t0;
    for (const auto& v : s.vendors) {
        Rng rng(derive_seed(s.seed, "volumes/" + v.id));
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(s.history_minutes));
        for (MinuteOffset m = first; m <= 0; ++m) {
            const double noise = v.noise_sd > 0.0 ? v.noise_sd * rng.normal() : 0.0;
            values.push_back(std::exp(true_log_baseline(v, t0, m) + noise));
        }
        out.volumes.vendors.emplace(v.id, VolumeSeries(v.id, MinuteSeries(t0, first, std::move(values))));
    }

    out.availability.anchor_epoch_minute = t0;
    {
        Rng rng(derive_seed(s.seed, "availability"));
        const MinuteOffset a_first = -(s.availability_minutes - 1);
        std::vector<double> values;
        for (MinuteOffset m = a_first; m <= 0; ++m) {
            double a = s.availability.at(static_cast<double>(m));
            if (s.availability.noise_sd > 0.0) a += s.availability.noise_sd * rng.normal();
            values.push_back(std::clamp(a, 0.0, 1.0));
        }
        out.availability.vendors.emplace(
            s.problematic_vendor,
            AvailabilitySeries(s.problematic_vendor, MinuteSeries(t0, a_first, std::move(values))));
    }

    {
        const auto& avail = out.availability.vendors.at(s.problematic_vendor).series;
        const auto& volume = out.volumes.vendors.at(s.problematic_vendor).series;
        std::string other = s.vendors.front().id == s.problematic_vendor ? s.vendors[1].id : s.vendors.front().id;
        EventOracleInput in;
        in.problematic_vendor = s.problematic_vendor;
        in.other_vendor = other;
        in.t0_epoch_minute = t0;
        in.first_minute = -(s.event_minutes - 1);
        in.last_minute = 0;
        in.availability = [&](MinuteOffset m) {
            if (avail.contains(m)) return avail.at(m);
            return std::clamp(s.availability.at(static_cast<double>(m)), 0.0, 1.0);
        };
        in.customers = [&](MinuteOffset m) {
            return static_cast<std::int64_t>(std::floor(s.event_customer_fraction * volume.at(m)));
        };
        in.behavior = s.behavior;
        in.seed = derive_seed(s.seed, "events");
        auto events = oracle_events(in);
        // Only what had been observed by the end of minute t0 is logged.
        const std::int64_t cutoff = (t0 + 1) * 60;
        std::erase_if(events, [cutoff](const AttemptEvent& e) { return e.timestamp_seconds >= cutoff; });
        std::stable_sort(events.begin(), events.end(), [](const AttemptEvent& a, const AttemptEvent& b) {
            return a.timestamp_seconds < b.timestamp_seconds;
        });
        out.events = std::move(events);
    }

    {
        Rng rng(derive_seed(s.seed, "wireoff"));
        const MinuteOffset w_first = s.wireoff.start_offset;
        const MinuteOffset w_last = w_first + s.wireoff.minutes - 1;
        const std::int64_t anchor = t0 + w_last;
        std::vector<double> w, cp, co;
        for (MinuteOffset m = w_first; m <= w_last; ++m) {
            double c_problem = 0.0;
            double c_rest = 0.0;
            for (const auto& v : s.vendors) {
                const double c = std::exp(true_log_baseline(v, t0, m));
                (v.id == s.problematic_vendor ? c_problem : c_rest) += c;
            }
            const double mean = s.wireoff.delta * c_problem + c_rest;
            const double noise = s.wireoff.noise_relative > 0.0 ? s.wireoff.noise_relative * rng.normal() : 0.0;
            w.push_back(mean * (1.0 + noise));
            cp.push_back(c_problem);
            co.push_back(c_rest);
        }
        const MinuteOffset start = w_first - w_last;
        out.wireoff_history = {MinuteSeries(anchor, start, std::move(w)), MinuteSeries(anchor, start, std::move(cp)),
                               MinuteSeries(anchor, start, std::move(co))};
    }

    json pmf = json::array();
    for (const auto& [sec, wt] : s.behavior.interattempt) pmf.push_back({sec, wt});
    out.truth = json{{"scenario", s.name},
                     {"seed", s.seed},
                     {"t0_epoch_minute", t0},
                     {"problematic_vendor", s.problematic_vendor},
                     {"delta", s.wireoff.delta},
                     {"retry_p", s.behavior.retry_p},
                     {"switch_p", s.behavior.switch_p},
                     {"interattempt_pmf", pmf},
                     {"actual_wireoff_m", s.actual_wireoff_m},
                     {"event_count", out.events.size()}};
    return out;
}

void write_generated(const GeneratedData& data, const std::filesystem::path& dir) {
    write_file_atomic(dir / "volumes.csv", format_volumes(data.volumes));
    write_file_atomic(dir / "availability.csv", format_availability(data.availability));
    write_file_atomic(dir / "events.csv", format_events(data.events));
    write_file_atomic(dir / "wireoff_history.csv", format_wireoff_history(data.wireoff_history));
    write_file_atomic(dir / "truth.json", data.truth.dump(2) + "\n");
}

}  // namespace wireoff
