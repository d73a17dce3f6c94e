#pragma once

#include "wireoff/availability.hpp"
#include "wireoff/baseline.hpp"
#include "wireoff/behavior.hpp"
#include "wireoff/decision.hpp"
#include "wireoff/diagnostics.hpp"
#include "wireoff/wiredoff.hpp"
#include "wireoff/wiredon.hpp"

#include <nlohmann/json.hpp>

namespace wireoff {

using Json = nlohmann::json;

// Doubles are written as the shortest decimal that reads back bitwise.

void to_json(Json& j, const BaselineModel& m);
void from_json(const Json& j, BaselineModel& m);

void to_json(Json& j, const TuningResult& r);

void to_json(Json& j, const DesModel& m);
void from_json(const Json& j, DesModel& m);
void to_json(Json& j, const DesFit& f);
void to_json(Json& j, const RollingEvaluation& e);

void to_json(Json& j, const BehaviorDistributions& d);
void from_json(const Json& j, BehaviorDistributions& d);
void to_json(Json& j, const BehaviorCounts& c);

void to_json(Json& j, const WiredOnForecast& f);

void to_json(Json& j, const DiagnosticsReport& r);
void from_json(const Json& j, DiagnosticsReport& r);

void to_json(Json& j, const WiredOffModel& m);
void from_json(const Json& j, WiredOffModel& m);
void to_json(Json& j, const AdfResult& r);

void to_json(Json& j, const Recommendation& r);
void from_json(const Json& j, Recommendation& r);
void to_json(Json& j, const WhatIf& w);

}  // namespace wireoff
