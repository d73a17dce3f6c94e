#pragma once

#include "wireoff/config.hpp"
#include "wireoff/io.hpp"
#include "wireoff/pipeline.hpp"
#include "wireoff/synth.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wireoff {

/// Whatever subset of the input files a command was given.
struct LoadedInputs {
    std::optional<VolumeTable> volumes;
    std::optional<AvailabilityTable> availability;
    std::optional<std::vector<AttemptEvent>> events;
    std::optional<WireoffHistory> wireoff_history;
};

/// Result of one batch command: the JSON document plus any side files,
/// all written into the output directory.
struct Artifacts {
    std::string name;  // the JSON goes to <name>.json
    nlohmann::json result;
    std::vector<std::pair<std::string, std::string>> files;  // file name, content
};

/// Indented JSON with a trailing newline, the form every artifact uses.
std::string render_json(const nlohmann::json& j);

void write_artifacts(const Artifacts& artifacts, const std::filesystem::path& dir);

/// "2025-08-01T10:19:00Z"
std::string format_utc_minute(std::int64_t epoch_minute);

/// Generates a scenario's data files. With a seed, the scenario's own seed is
/// replaced by the generator stream of that seed.
Artifacts run_synth(const Scenario& scenario, std::optional<std::uint64_t> seed);

Artifacts run_fit_baseline(const LoadedInputs& in, const RunConfig& config);
Artifacts run_forecast_availability(const LoadedInputs& in, const RunConfig& config);
Artifacts run_estimate_behavior(const LoadedInputs& in, const RunConfig& config);
Artifacts run_simulate_wiredon(const LoadedInputs& in, const RunConfig& config);
Artifacts run_fit_wiredoff(const LoadedInputs& in, const RunConfig& config);
Artifacts run_diagnose(const LoadedInputs& in, const RunConfig& config);
Artifacts run_recommend(const LoadedInputs& in, const RunConfig& config);

/// One-line human summary of a recommendation.
std::string recommendation_summary(const Recommendation& rec);

/// Recommendation document with the summary line and the wall-clock
/// wire-off time added.
nlohmann::json recommendation_json(const Recommendation& rec, const std::string& problematic_vendor,
                                   std::optional<double> delta);
nlohmann::json recommendation_json(const PipelineResult& result);

}  // namespace wireoff
