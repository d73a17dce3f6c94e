#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wireoff {

enum class Action { WireOffAt, KeepWiredOn };

const char* to_string(Action action) noexcept;

struct Recommendation {
    Action action = Action::KeepWiredOn;
    std::optional<std::int64_t> m_star;  // set iff action == WireOffAt
    std::int64_t horizon = 0;
    std::int64_t anchor_epoch_minute = 0;
    std::vector<double> wiredon;   // index m-1 for m in [1, R]
    std::vector<double> wiredoff;
    std::vector<double> margin;    // wiredoff - wiredon
};

/// Smallest m* such that wired-off strictly beats wired-on at every minute
/// from m* through the horizon. Ties keep the vendor wired on.
Recommendation recommend(std::span<const double> wiredon, std::span<const double> wiredoff,
                         std::int64_t anchor_epoch_minute = 0);

/// actual − m*. DomainError when the recommendation keeps the vendor on.
std::int64_t lead_time(const Recommendation& rec, std::int64_t actual_wireoff_m);

struct WhatIf {
    std::int64_t wireoff_m = 0;
    double total_off_path = 0.0;  // wired-on before wireoff_m, wired-off from it
    double total_on_path = 0.0;   // wired-on throughout
    double difference = 0.0;      // off path minus on path
};

/// Completed-experience totals for wiring off at a candidate minute.
/// ValidationError when wireoff_m is outside [1, R].
WhatIf whatif(std::span<const double> wiredon, std::span<const double> wiredoff, std::int64_t wireoff_m);

}  // namespace wireoff
