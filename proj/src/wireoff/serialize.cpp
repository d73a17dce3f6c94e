#include "wireoff/serialize.hpp"

#include "wireoff/errors.hpp"

#include <string>

namespace wireoff {

void to_json(Json& j, const BaselineModel& m) {
    j = Json{{"vendor_id", m.vendor_id},
             {"anchor", m.anchor_epoch_minute},
             {"H", m.seasonal.harmonics},
             {"L", m.seasonal.period},
             {"sigma_prime", m.seasonal.prior_scale},
             {"sigma", m.seasonal.noise_scale},
             {"lambda", m.trend.prior_scale},
             {"changepoint_count", m.trend.changepoint_count},
             {"changepoint_range", m.trend.changepoint_range},
             {"history_length", m.trend.history_length},
             {"beta", m.beta},
             {"kappa", m.kappa},
             {"delta", m.delta},
             {"gamma", m.gamma},
             {"theta", m.theta},
             {"changepoints", m.trend.changepoints},
             {"objective", m.objective},
             {"iterations", m.iterations}};
}

void from_json(const Json& j, BaselineModel& m) {
    m.vendor_id = j.at("vendor_id").get<std::string>();
    m.anchor_epoch_minute = j.at("anchor").get<std::int64_t>();
    m.seasonal.harmonics = j.at("H").get<int>();
    m.seasonal.period = j.at("L").get<std::int64_t>();
    m.seasonal.prior_scale = j.at("sigma_prime").get<double>();
    m.seasonal.noise_scale = j.value("sigma", 1.0);
    m.trend.prior_scale = j.at("lambda").get<double>();
    m.trend.changepoint_count = j.value("changepoint_count", static_cast<int>(j.at("changepoints").size()));
    m.trend.changepoint_range = j.value("changepoint_range", 0.8);
    m.trend.history_length = j.at("history_length").get<std::int64_t>();
    m.beta = j.at("beta").get<std::vector<double>>();
    m.kappa = j.at("kappa").get<double>();
    m.delta = j.at("delta").get<std::vector<double>>();
    m.gamma = j.at("gamma").get<std::vector<double>>();
    m.theta = j.at("theta").get<double>();
    m.trend.changepoints = j.at("changepoints").get<std::vector<MinuteOffset>>();
    m.objective = j.value("objective", 0.0);
    m.iterations = j.value("iterations", 0);
    if (m.beta.size() != static_cast<std::size_t>(2 * m.seasonal.harmonics)) {
        throw ValidationError("baseline model: beta must hold 2*H coefficients");
    }
    if (m.delta.size() != m.trend.changepoints.size() || m.gamma.size() != m.delta.size()) {
        throw ValidationError("baseline model: delta, gamma and changepoints differ in length");
    }
}

void to_json(Json& j, const TuningResult& r) {
    Json trials = Json::array();
    for (const auto& t : r.trials) {
        Json row{{"H", t.seasonal.harmonics}, {"sigma_prime", t.seasonal.prior_scale}, {"lambda", t.trend.prior_scale}};
        row["holdout_rmse"] = t.holdout_rmse ? Json(*t.holdout_rmse) : Json(nullptr);
        if (!t.failure.empty()) row["failure"] = t.failure;
        trials.push_back(std::move(row));
    }
    j = Json{{"H", r.seasonal.harmonics},
             {"sigma_prime", r.seasonal.prior_scale},
             {"lambda", r.trend.prior_scale},
             {"holdout_rmse", r.holdout_rmse},
             {"best_trial", r.best_trial},
             {"trials", std::move(trials)}};
}

void to_json(Json& j, const DesModel& m) {
    j = Json{{"alpha", m.alpha},
             {"eta", m.eta},
             {"S0", m.level},
             {"b0", m.trend},
             {"window", {m.window_start, m.window_end}},
             {"fit_rmse", m.fit_rmse}};
}

void from_json(const Json& j, DesModel& m) {
    m.alpha = j.at("alpha").get<double>();
    m.eta = j.at("eta").get<double>();
    m.level = j.at("S0").get<double>();
    m.trend = j.at("b0").get<double>();
    const auto& w = j.at("window");
    m.window_start = w.at(0).get<MinuteOffset>();
    m.window_end = w.at(1).get<MinuteOffset>();
    m.fit_rmse = j.at("fit_rmse").get<double>();
}

void to_json(Json& j, const DesFit& f) {
    Json trials = Json::array();
    for (const auto& t : f.trials) trials.push_back({{"alpha", t.alpha}, {"eta", t.eta}, {"rmse", t.rmse}});
    j = Json{{"model", f.model}, {"best_trial", f.best_trial}, {"trials", std::move(trials)}};
}

void to_json(Json& j, const RollingEvaluation& e) {
    j = Json{{"window_end", e.window_end}, {"horizon_rmse", e.horizon_rmse}, {"forecast", e.forecast}};
}

void to_json(Json& j, const BehaviorDistributions& d) {
    Json retry = Json::object();
    Json sw = Json::object();
    for (std::size_t i = 0; i < d.retry_p.size(); ++i) retry[std::to_string(i + 1)] = d.retry_p[i];
    for (std::size_t i = 0; i < d.switch_p.size(); ++i) sw[std::to_string(i + 1)] = d.switch_p[i];
    Json pmf = Json::array();
    const auto support = d.interattempt.support();
    const auto probs = d.interattempt.pmf();
    for (std::size_t i = 0; i < support.size(); ++i) pmf.push_back({support[i], probs[i]});
    j = Json{{"retry_p", std::move(retry)}, {"switch_p", std::move(sw)}, {"interattempt_pmf", std::move(pmf)}};
}

namespace {

std::vector<double> indexed_probabilities(const Json& obj, const char* name) {
    if (!obj.is_object()) throw ValidationError(std::string(name) + " must be an object keyed by failure count");
    std::vector<double> out(obj.size(), -1.0);
    for (const auto& [key, value] : obj.items()) {
        std::size_t pos = 0;
        int k = 0;
        try {
            k = std::stoi(key, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != key.size() || k < 1 || static_cast<std::size_t>(k) > out.size()) {
            throw ValidationError(std::string(name) + " keys must be 1..k_max");
        }
        out[static_cast<std::size_t>(k - 1)] = value.get<double>();
    }
    return out;
}

}  // namespace

void from_json(const Json& j, BehaviorDistributions& d) {
    auto retry = indexed_probabilities(j.at("retry_p"), "retry_p");
    auto sw = indexed_probabilities(j.at("switch_p"), "switch_p");
    std::vector<std::pair<std::int64_t, double>> pmf;
    for (const auto& row : j.at("interattempt_pmf")) {
        pmf.emplace_back(row.at(0).get<std::int64_t>(), row.at(1).get<double>());
    }
    d = BehaviorDistributions::from_parameters(std::move(retry), std::move(sw), std::move(pmf));
}

void to_json(Json& j, const BehaviorCounts& c) {
    j = Json{{"reached", c.reached}, {"retried", c.retried}, {"switched", c.switched}, {"gaps", c.gaps}};
}

void to_json(Json& j, const WiredOnForecast& f) {
    std::vector<std::int64_t> offsets(static_cast<std::size_t>(f.horizon));
    for (std::size_t i = 0; i < offsets.size(); ++i) offsets[i] = static_cast<std::int64_t>(i) + 1;
    Json tallies = Json::array();
    for (const auto& t : f.tallies) {
        tallies.push_back({{"spawned", t.spawned},
                           {"success_problematic", t.resolved[0]},
                           {"success_other", t.resolved[1]},
                           {"abandoned", t.resolved[2]},
                           {"in_flight", t.in_flight},
                           {"before_horizon", t.before_horizon},
                           {"conserved", t.conserved()}});
    }
    j = Json{{"horizon", f.horizon},
             {"replications", f.replications},
             {"offset_m", offsets},
             {"w_on_mean", f.w_on_mean},
             {"w_on_p10", f.w_on_p10},
             {"w_on_p90", f.w_on_p90},
             {"a_problematic", f.a_problematic},
             {"a_other", f.a_other},
             {"abandoned", f.abandoned},
             {"c_other", f.c_other},
             {"tallies", std::move(tallies)}};
}

void to_json(Json& j, const DiagnosticsReport& r) {
    Json qq = Json::array();
    for (const auto& p : r.qq) qq.push_back({p.theoretical, p.sample});
    j = Json{{"residual_count", r.residual_count},
             {"dw_statistic", r.dw_statistic},
             {"hc_statistic", r.hc_statistic},
             {"hc_p_value", r.hc_p_value},
             {"hc_intercept", r.hc_intercept},
             {"acf_lag1", r.acf_lag1},
             {"acf_ci_halfwidth", r.acf_ci_halfwidth},
             {"acf", r.acf},
             {"qq_points", std::move(qq)},
             {"rmse", r.rmse},
             {"pass", {{"durbin_watson", r.dw_pass()}, {"harvey_collier", r.hc_pass()}, {"acf_lag1", r.acf_pass()}}}};
}

void from_json(const Json& j, DiagnosticsReport& r) {
    r.residual_count = j.at("residual_count").get<std::size_t>();
    r.dw_statistic = j.at("dw_statistic").get<double>();
    r.hc_statistic = j.at("hc_statistic").get<double>();
    r.hc_p_value = j.at("hc_p_value").get<double>();
    r.hc_intercept = j.value("hc_intercept", false);
    r.acf_lag1 = j.at("acf_lag1").get<double>();
    r.acf_ci_halfwidth = j.at("acf_ci_halfwidth").get<double>();
    r.acf = j.at("acf").get<std::vector<double>>();
    r.qq.clear();
    for (const auto& p : j.at("qq_points")) r.qq.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    r.rmse = j.at("rmse").get<double>();
}

void to_json(Json& j, const WiredOffModel& m) {
    j = Json{{"delta", m.delta}, {"fit_window", m.fit_window}, {"residuals", m.residuals}};
    j["delta_plausible"] = m.delta_plausible();
    if (m.diagnostics) j["diagnostics"] = *m.diagnostics;
}

void from_json(const Json& j, WiredOffModel& m) {
    m.delta = j.at("delta").get<double>();
    m.fit_window = j.at("fit_window").get<std::vector<std::int64_t>>();
    m.residuals = j.at("residuals").get<std::vector<double>>();
    if (j.contains("diagnostics")) {
        m.diagnostics = j.at("diagnostics").get<DiagnosticsReport>();
    } else {
        m.diagnostics.reset();
    }
}

void to_json(Json& j, const AdfResult& r) {
    j = Json{{"statistic", r.statistic},
             {"lag", r.lag},
             {"nobs", r.nobs},
             {"critical_values", {{"1%", r.critical_1}, {"5%", r.critical_5}, {"10%", r.critical_10}}},
             {"verdict", r.stationary ? "stationary" : "non-stationary"}};
}

void to_json(Json& j, const Recommendation& r) {
    Json curves = Json::array();
    for (std::size_t i = 0; i < r.wiredon.size(); ++i) {
        const auto m = static_cast<std::int64_t>(i) + 1;
        curves.push_back({{"offset_m", m},
                          {"epoch_minute", r.anchor_epoch_minute + m},
                          {"wiredon", r.wiredon[i]},
                          {"wiredoff", r.wiredoff[i]}});
    }
    j = Json{{"action", to_string(r.action)},
             {"m_star", r.m_star ? Json(*r.m_star) : Json(nullptr)},
             {"anchor_epoch_minute", r.anchor_epoch_minute},
             {"horizon", r.horizon},
             {"curves", std::move(curves)},
             {"margin", r.margin}};
    if (r.m_star) j["wireoff_epoch_minute"] = r.anchor_epoch_minute + *r.m_star;
}

void from_json(const Json& j, Recommendation& r) {
    const auto action = j.at("action").get<std::string>();
    if (action == "WireOffAt") {
        r.action = Action::WireOffAt;
    } else if (action == "KeepWiredOn") {
        r.action = Action::KeepWiredOn;
    } else {
        throw ValidationError("unknown recommendation action '" + action + "'");
    }
    const auto& ms = j.at("m_star");
    r.m_star = ms.is_null() ? std::nullopt : std::optional<std::int64_t>(ms.get<std::int64_t>());
    r.anchor_epoch_minute = j.at("anchor_epoch_minute").get<std::int64_t>();
    r.horizon = j.at("horizon").get<std::int64_t>();
    r.wiredon.clear();
    r.wiredoff.clear();
    for (const auto& c : j.at("curves")) {
        r.wiredon.push_back(c.at("wiredon").get<double>());
        r.wiredoff.push_back(c.at("wiredoff").get<double>());
    }
    r.margin = j.at("margin").get<std::vector<double>>();
}

void to_json(Json& j, const WhatIf& w) {
    j = Json{{"wireoff_m", w.wireoff_m},
             {"total_completed_off_path", w.total_off_path},
             {"total_completed_on_path", w.total_on_path},
             {"difference", w.difference}};
}

}  // namespace wireoff
