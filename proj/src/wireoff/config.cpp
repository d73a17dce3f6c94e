#include "wireoff/config.hpp"

#include <functional>

namespace wireoff {

namespace {

std::string join_fields(const std::map<std::string, std::string>& fields) {
    std::string out;
    for (const auto& [k, v] : fields) {
        if (!out.empty()) out += "; ";
        out += k + ": " + v;
    }
    return out;
}

}  // namespace

FieldError::FieldError(FieldMap fields)
    : ValidationError("invalid request: " + join_fields(fields)), fields_(std::move(fields)) {}

RunConfig::RunConfig() { fit.tuning_trials = 10; }

RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig c;
    std::map<std::string, std::string> errors;
    if (j.is_null()) return c;
    if (!j.is_object()) throw FieldError(FieldMap{{"body", "must be a JSON object"}});

    using Handler = std::function<void(const nlohmann::json&)>;
    auto integer = [&](const char* key, auto& target, long long lo, long long hi) -> Handler {
        return [&, key, lo, hi](const nlohmann::json& v) {
            if (!v.is_number_integer()) {
                errors[key] = "must be an integer";
                return;
            }
            const auto x = v.get<long long>();
            if (x < lo || x > hi) {
                errors[key] = "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
                return;
            }
            target = static_cast<std::remove_reference_t<decltype(target)>>(x);
        };
    };
    auto positive = [&](const char* key, double& target, double hi) -> Handler {
        return [&, key, hi](const nlohmann::json& v) {
            if (!v.is_number()) {
                errors[key] = "must be a number";
                return;
            }
            const double x = v.get<double>();
            if (!(x > 0.0 && x <= hi)) {
                errors[key] = "must lie in (0, " + nlohmann::json(hi).dump() + "]";
                return;
            }
            target = x;
        };
    };
    auto boolean = [&](const char* key, bool& target) -> Handler {
        return [&, key](const nlohmann::json& v) {
            if (!v.is_boolean()) {
                errors[key] = "must be a boolean";
                return;
            }
            target = v.get<bool>();
        };
    };

    constexpr long long kMaxInt = 1'000'000'000;
    const std::map<std::string, Handler> handlers{
        {"seed",
         [&](const nlohmann::json& v) {
             if (v.is_number_unsigned()) {
                 c.seed = v.get<std::uint64_t>();
                 c.seed_given = true;
             } else if (v.is_number_integer() && v.get<long long>() >= 0) {
                 c.seed = static_cast<std::uint64_t>(v.get<long long>());
                 c.seed_given = true;
             } else {
                 errors["seed"] = "must be an unsigned 64-bit integer";
             }
         }},
        {"threads", integer("threads", c.threads, 1, 1024)},
        {"horizon", integer("horizon", c.sim.horizon, 1, 100000)},
        {"warmup", integer("warmup", c.sim.warmup_start, -100000, -10)},
        {"replications", integer("replications", c.sim.replications, 1, 100000)},
        {"trials", integer("trials", c.fit.tuning_trials, 0, 100000)},
        {"des_trials", integer("des_trials", c.fit.des_trials, 0, 10000000)},
        {"des_window", integer("des_window", c.fit.des_window, 1, kMaxInt)},
        {"holdout_minutes", integer("holdout_minutes", c.fit.holdout_minutes, 1, kMaxInt)},
        {"harmonics", integer("harmonics", c.fit.seasonal.harmonics, 1, 1000)},
        {"period", integer("period", c.fit.seasonal.period, 2, kMaxInt)},
        {"changepoint_count", integer("changepoint_count", c.fit.trend.changepoint_count, 0, 100000)},
        {"max_retry_gap_seconds", integer("max_retry_gap_seconds", c.fit.behavior.max_retry_gap_seconds, 1, kMaxInt)},
        {"max_lag", integer("max_lag", c.max_lag, 1, 100000)},
        {"seasonality_prior", positive("seasonality_prior", c.fit.seasonal.prior_scale, 1e12)},
        {"changepoint_prior", positive("changepoint_prior", c.fit.trend.prior_scale, 1e12)},
        {"changepoint_range", positive("changepoint_range", c.fit.trend.changepoint_range, 1.0)},
        {"noise_scale", positive("noise_scale", c.fit.seasonal.noise_scale, 1e12)},
        {"smoothing", boolean("smoothing", c.fit.behavior.smoothing)},
        {"hc_intercept", boolean("hc_intercept", c.fit.hc_intercept)},
        {"stochastic_rounding", boolean("stochastic_rounding", c.sim.stochastic_rounding)},
        {"sample_changepoints", boolean("sample_changepoints", c.sim.sample_changepoints)},
        {"problematic_vendor",
         [&](const nlohmann::json& v) {
             if (!v.is_string()) {
                 errors["problematic_vendor"] = "must be a string";
                 return;
             }
             c.problematic_vendor = v.get<std::string>();
         }},
    };

    for (const auto& [key, value] : j.items()) {
        auto it = handlers.find(key);
        if (it == handlers.end()) {
            errors[key] = "unknown field";
            continue;
        }
        it->second(value);
    }
    if (!errors.empty()) throw FieldError(std::move(errors));
    c.sim.threads = c.threads;
    return c;
}

RunConfig parse_run_config(std::string_view text) {
    if (text.empty()) return RunConfig{};
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FieldError(FieldMap{{"body", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_run_config(j);
}

nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json j{{"seed", c.seed},
                     {"threads", c.threads},
                     {"horizon", c.sim.horizon},
                     {"warmup", c.sim.warmup_start},
                     {"replications", c.sim.replications},
                     {"trials", c.fit.tuning_trials},
                     {"des_trials", c.fit.des_trials},
                     {"des_window", c.fit.des_window},
                     {"holdout_minutes", c.fit.holdout_minutes},
                     {"harmonics", c.fit.seasonal.harmonics},
                     {"period", c.fit.seasonal.period},
                     {"changepoint_count", c.fit.trend.changepoint_count},
                     {"max_retry_gap_seconds", c.fit.behavior.max_retry_gap_seconds},
                     {"max_lag", c.max_lag},
                     {"seasonality_prior", c.fit.seasonal.prior_scale},
                     {"changepoint_prior", c.fit.trend.prior_scale},
                     {"changepoint_range", c.fit.trend.changepoint_range},
                     {"noise_scale", c.fit.seasonal.noise_scale},
                     {"smoothing", c.fit.behavior.smoothing},
                     {"hc_intercept", c.fit.hc_intercept},
                     {"stochastic_rounding", c.sim.stochastic_rounding},
                     {"sample_changepoints", c.sim.sample_changepoints}};
    if (!c.problematic_vendor.empty()) j["problematic_vendor"] = c.problematic_vendor;
    return j;
}

}  // namespace wireoff
