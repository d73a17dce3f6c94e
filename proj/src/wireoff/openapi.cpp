#include "wireoff/service.hpp"

#include <nlohmann/json.hpp>

namespace wireoff {

namespace {

using nlohmann::json;

json ref(const std::string& name) { return {{"$ref", "#/components/schemas/" + name}}; }

json content(const json& schema) { return {{"application/json", {{"schema", schema}}}}; }

json reply(const std::string& description, const std::string& schema) {
    return {{"description", description}, {"content", content(ref(schema))}};
}

json errors(std::initializer_list<int> codes) {
    static const std::map<int, std::string> text{{400, "Malformed request; `fields` names the offending inputs"},
                                                 {404, "Unknown session"},
                                                 {409, "A prerequisite step has not run"},
                                                 {422, "Model fit failed on this data"}};
    json out = json::object();
    for (int c : codes) out[std::to_string(c)] = reply(text.at(c), "Error");
    return out;
}

json merge(json a, const json& b) {
    a.update(b);
    return a;
}

const json kSessionParam{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}};

json number_array() { return {{"type", "array"}, {"items", {{"type", "number"}}}}; }
json integer_array() { return {{"type", "array"}, {"items", {{"type", "integer"}}}}; }

json build() {
    json paths = json::object();
    paths["/v1/sessions"]["post"] = {
        {"summary", "Create a session from CSV payloads or server-side file paths"},
        {"requestBody", {{"required", true}, {"content", content(ref("SessionCreate"))}}},
        {"responses", merge({{"201", reply("Session created", "Session")}}, errors({400}))}};
    paths["/v1/sessions/{id}"]["get"] = {{"summary", "Session metadata and current versions"},
                                         {"parameters", {kSessionParam}},
                                         {"responses", merge({{"200", reply("Session", "Session")}}, errors({404}))}};
    paths["/v1/sessions/{id}"]["delete"] = {{"summary", "Drop a session and its snapshot"},
                                            {"parameters", {kSessionParam}},
                                            {"responses", merge({{"204", {{"description", "Deleted"}}}}, errors({404}))}};
    paths["/v1/sessions/{id}/fit"]["post"] = {
        {"summary", "Fit baselines, availability, behavior and the wired-off model; creates a new fit version"},
        {"parameters", {kSessionParam}},
        {"requestBody", {{"required", true}, {"content", content(ref("FitRequest"))}}},
        {"responses", merge({{"200", reply("Fitted model summaries", "FitResponse")}}, errors({400, 404, 422}))}};
    paths["/v1/sessions/{id}/forecast"]["get"] = {
        {"summary", "Per-minute forecast curve over m = 1..horizon"},
        {"parameters",
         {kSessionParam,
          {{"name", "kind"},
           {"in", "query"},
           {"required", true},
           {"schema", {{"type", "string"}, {"enum", {"baseline", "availability", "wiredoff"}}}}},
          {{"name", "horizon"},
           {"in", "query"},
           {"schema", {{"type", "integer"}, {"minimum", 1}, {"default", 60}}}},
          {{"name", "sample_changepoints"}, {"in", "query"}, {"schema", {{"type", "boolean"}, {"default", false}}}}}},
        {"responses", merge({{"200", reply("Forecast curve", "Curve")}}, errors({400, 404, 409}))}};
    paths["/v1/sessions/{id}/simulate"]["post"] = {
        {"summary", "Monte Carlo wired-on forecast from the latest fit"},
        {"parameters", {kSessionParam}},
        {"requestBody", {{"required", true}, {"content", content(ref("SimulateRequest"))}}},
        {"responses", merge({{"200", reply("Wired-on forecast", "WiredOnForecast")}}, errors({400, 404, 409}))}};
    paths["/v1/sessions/{id}/recommendation"]["get"] = {
        {"summary", "Decision rule applied to the latest wired-on and wired-off curves"},
        {"parameters", {kSessionParam}},
        {"responses", merge({{"200", reply("Recommendation", "Recommendation")}}, errors({404, 409}))}};
    paths["/v1/sessions/{id}/whatif"]["post"] = {
        {"summary", "Completed experiences when wiring off at a chosen minute versus staying on"},
        {"parameters", {kSessionParam}},
        {"requestBody", {{"required", true}, {"content", content(ref("WhatIfRequest"))}}},
        {"responses", merge({{"200", reply("What-if totals", "WhatIf")}}, errors({400, 404, 409}))}};
    paths["/v1/sessions/{id}/diagnostics"]["get"] = {
        {"summary", "Residual diagnostics of the wired-off model"},
        {"parameters", {kSessionParam}},
        {"responses", merge({{"200", reply("Diagnostics report", "DiagnosticsReport")}}, errors({404, 409}))}};
    paths["/v1/openapi.json"]["get"] = {{"summary", "This document"},
                                        {"responses", {{"200", {{"description", "OpenAPI document"}}}}}};
    paths["/v1/health"]["get"] = {{"summary", "Liveness"}, {"responses", {{"200", {{"description", "ok"}}}}}};

    json schemas = json::object();
    schemas["Error"] = {{"type", "object"},
                        {"required", {"error", "message"}},
                        {"properties",
                         {{"error", {{"type", "string"}}},
                          {"message", {{"type", "string"}}},
                          {"fields", {{"type", "object"}, {"additionalProperties", {{"type", "string"}}}}}}}};
    json create_props = json::object();
    for (const char* kind : {"volumes", "availability", "events", "wireoff_history"}) {
        create_props[std::string(kind) + "_csv"] = {{"type", "string"}};
        create_props[std::string(kind) + "_path"] = {{"type", "string"}};
    }
    create_props["problematic_vendor"] = {{"type", "string"}};
    schemas["SessionCreate"] = {{"type", "object"}, {"properties", create_props}, {"additionalProperties", false}};
    schemas["Session"] = {{"type", "object"},
                          {"required", {"session_id", "problematic_vendor", "t0_epoch_minute"}},
                          {"properties",
                           {{"session_id", {{"type", "string"}}},
                            {"created_at", {{"type", "string"}}},
                            {"problematic_vendor", {{"type", "string"}}},
                            {"t0_epoch_minute", {{"type", "integer"}}},
                            {"vendors", {{"type", "array"}, {"items", {{"type", "string"}}}}},
                            {"has_wireoff_history", {{"type", "boolean"}}},
                            {"fit_version", {{"type", {"integer", "null"}}}},
                            {"simulation_version", {{"type", {"integer", "null"}}}}}}};
    schemas["FitRequest"] = {{"type", "object"},
                             {"required", {"seed"}},
                             {"properties",
                              {{"seed", {{"type", "integer"}, {"minimum", 0}}},
                               {"trials", {{"type", "integer"}, {"minimum", 0}}},
                               {"des_trials", {{"type", "integer"}, {"minimum", 0}}},
                               {"des_window", {{"type", "integer"}, {"minimum", 1}}},
                               {"holdout_minutes", {{"type", "integer"}, {"minimum", 1}}},
                               {"harmonics", {{"type", "integer"}, {"minimum", 1}}},
                               {"period", {{"type", "integer"}, {"minimum", 2}}},
                               {"changepoint_count", {{"type", "integer"}, {"minimum", 0}}},
                               {"changepoint_range", {{"type", "number"}}},
                               {"seasonality_prior", {{"type", "number"}}},
                               {"changepoint_prior", {{"type", "number"}}},
                               {"noise_scale", {{"type", "number"}}},
                               {"smoothing", {{"type", "boolean"}}},
                               {"max_retry_gap_seconds", {{"type", "integer"}, {"minimum", 1}}},
                               {"hc_intercept", {{"type", "boolean"}}},
                               {"max_lag", {{"type", "integer"}, {"minimum", 1}}}}},
                             {"additionalProperties", false}};
    schemas["FitResponse"] = {{"type", "object"},
                              {"required", {"session_id", "fit_version", "models"}},
                              {"properties",
                               {{"session_id", {{"type", "string"}}},
                                {"fit_version", {{"type", "integer"}}},
                                {"seed", {{"type", "integer"}}},
                                {"delta", {{"type", {"number", "null"}}}},
                                {"models", {{"type", "object"}}}}}};
    schemas["SimulateRequest"] = {{"type", "object"},
                                  {"required", {"seed"}},
                                  {"properties",
                                   {{"seed", {{"type", "integer"}, {"minimum", 0}}},
                                    {"horizon", {{"type", "integer"}, {"minimum", 1}}},
                                    {"replications", {{"type", "integer"}, {"minimum", 1}}},
                                    {"threads", {{"type", "integer"}, {"minimum", 1}}},
                                    {"warmup", {{"type", "integer"}, {"maximum", -10}}},
                                    {"stochastic_rounding", {{"type", "boolean"}}},
                                    {"sample_changepoints", {{"type", "boolean"}}}}},
                                  {"additionalProperties", false}};
    schemas["Curve"] = {{"type", "object"},
                        {"required", {"kind", "horizon", "offset_m", "values"}},
                        {"properties",
                         {{"kind", {{"type", "string"}}},
                          {"horizon", {{"type", "integer"}}},
                          {"anchor_epoch_minute", {{"type", "integer"}}},
                          {"fit_version", {{"type", "integer"}}},
                          {"offset_m", integer_array()},
                          {"epoch_minute", integer_array()},
                          {"values", number_array()}}}};
    schemas["WiredOnForecast"] = {{"type", "object"},
                                  {"required", {"horizon", "replications", "w_on_mean", "w_on_p10", "w_on_p90"}},
                                  {"properties",
                                   {{"horizon", {{"type", "integer"}}},
                                    {"replications", {{"type", "integer"}}},
                                    {"offset_m", integer_array()},
                                    {"w_on_mean", number_array()},
                                    {"w_on_p10", number_array()},
                                    {"w_on_p90", number_array()},
                                    {"a_problematic", number_array()},
                                    {"a_other", number_array()},
                                    {"abandoned", number_array()},
                                    {"c_other", number_array()},
                                    {"tallies", {{"type", "array"}, {"items", {{"type", "object"}}}}}}}};
    schemas["Recommendation"] = {
        {"type", "object"},
        {"required", {"action", "m_star", "horizon", "anchor_epoch_minute", "curves", "margin", "summary"}},
        {"properties",
         {{"action", {{"type", "string"}, {"enum", {"WireOffAt", "KeepWiredOn"}}}},
          {"m_star", {{"type", {"integer", "null"}}}},
          {"horizon", {{"type", "integer"}}},
          {"anchor_epoch_minute", {{"type", "integer"}}},
          {"wireoff_epoch_minute", {{"type", "integer"}}},
          {"wireoff_time_utc", {{"type", "string"}}},
          {"curves", {{"type", "array"}, {"items", {{"type", "object"}}}}},
          {"margin", number_array()},
          {"summary", {{"type", "string"}}}}}};
    schemas["WhatIfRequest"] = {{"type", "object"},
                                {"required", {"wireoff_m"}},
                                {"properties", {{"wireoff_m", {{"type", "integer"}, {"minimum", 1}}}}},
                                {"additionalProperties", false}};
    schemas["WhatIf"] = {{"type", "object"},
                         {"required",
                          {"wireoff_m", "total_completed_off_path", "total_completed_on_path", "difference"}},
                         {"properties",
                          {{"wireoff_m", {{"type", "integer"}}},
                           {"total_completed_off_path", {{"type", "number"}}},
                           {"total_completed_on_path", {{"type", "number"}}},
                           {"difference", {{"type", "number"}}}}}};
    schemas["DiagnosticsReport"] = {{"type", "object"},
                                    {"required", {"dw_statistic", "hc_statistic", "hc_p_value", "acf_lag1"}},
                                    {"properties",
                                     {{"dw_statistic", {{"type", "number"}}},
                                      {"hc_statistic", {{"type", "number"}}},
                                      {"hc_p_value", {{"type", "number"}}},
                                      {"acf_lag1", {{"type", "number"}}},
                                      {"acf_ci_halfwidth", {{"type", "number"}}},
                                      {"rmse", {{"type", "number"}}},
                                      {"qq_points", {{"type", "array"}}},
                                      {"stationarity", {{"type", {"object", "null"}}}}}}};

    return {{"openapi", "3.1.0"},
            {"info",
             {{"title", "wire-off decision service"},
              {"version", "1.0.0"},
              {"description", "Forecasts completed customer experiences with a degraded vendor wired on and "
                              "wired off, and recommends when to wire it off."}}},
            {"paths", paths},
            {"components", {{"schemas", schemas}}}};
}

}  // namespace

std::string openapi_document() {
    static const std::string doc = build().dump(2);
    return doc;
}

}  // namespace wireoff
