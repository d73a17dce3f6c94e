#pragma once

#include "wireoff/errors.hpp"
#include "wireoff/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>

namespace wireoff {

using FieldMap = std::map<std::string, std::string>;

/// Validation failure that names the offending request fields.
class FieldError : public ValidationError {
public:
    explicit FieldError(FieldMap fields);
    const FieldMap& fields() const noexcept { return fields_; }

private:
    FieldMap fields_;
};

/// Run settings shared by the CLI, the C API and the service.
struct RunConfig {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    FitConfig fit;
    SimulationConfig sim;
    std::string problematic_vendor;
    std::size_t max_lag = 20;

    RunConfig();
};

/// Reads recognised keys from a JSON object on top of the defaults. Unknown
/// keys and out-of-range values are reported together as a FieldError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config(std::string_view json_text);

nlohmann::json run_config_to_json(const RunConfig& c);

}  // namespace wireoff
