#include "wireoff/decision.hpp"

#include "wireoff/errors.hpp"

#include <string>

namespace wireoff {

const char* to_string(Action action) noexcept {
    return action == Action::WireOffAt ? "WireOffAt" : "KeepWiredOn";
}

Recommendation recommend(std::span<const double> wiredon, std::span<const double> wiredoff,
                         std::int64_t anchor_epoch_minute) {
    if (wiredon.size() != wiredoff.size()) throw AlignmentError("wired-on and wired-off curves differ in length");
    if (wiredon.empty()) throw ValidationError("decision horizon must be at least one minute");
    Recommendation rec;
    rec.horizon = static_cast<std::int64_t>(wiredon.size());
    rec.anchor_epoch_minute = anchor_epoch_minute;
    rec.wiredon.assign(wiredon.begin(), wiredon.end());
    rec.wiredoff.assign(wiredoff.begin(), wiredoff.end());
    rec.margin.resize(wiredon.size());
    for (std::size_t i = 0; i < wiredon.size(); ++i) rec.margin[i] = wiredoff[i] - wiredon[i];

    // Walk back from the horizon while the margin stays strictly positive.
    std::int64_t m = rec.horizon;
    while (m >= 1 && rec.margin[static_cast<std::size_t>(m - 1)] > 0.0) --m;
    if (m < rec.horizon) {
        rec.action = Action::WireOffAt;
        rec.m_star = m + 1;
    }
    return rec;
}

std::int64_t lead_time(const Recommendation& rec, std::int64_t actual_wireoff_m) {
    if (rec.action != Action::WireOffAt || !rec.m_star) {
        throw DomainError("lead time is undefined when the recommendation keeps the vendor wired on");
    }
    return actual_wireoff_m - *rec.m_star;
}

WhatIf whatif(std::span<const double> wiredon, std::span<const double> wiredoff, std::int64_t wireoff_m) {
    if (wiredon.size() != wiredoff.size()) throw AlignmentError("wired-on and wired-off curves differ in length");
    const auto R = static_cast<std::int64_t>(wiredon.size());
    if (wireoff_m < 1 || wireoff_m > R) {
        throw ValidationError("wireoff_m must lie in [1, " + std::to_string(R) + "]");
    }
    WhatIf w;
    w.wireoff_m = wireoff_m;
    double diff = 0.0;
    for (std::int64_t m = 1; m <= R; ++m) {
        const auto i = static_cast<std::size_t>(m - 1);
        w.total_on_path += wiredon[i];
        w.total_off_path += m < wireoff_m ? wiredon[i] : wiredoff[i];
        if (m >= wireoff_m) diff += wiredoff[i] - wiredon[i];
    }
    // Summing the margins directly keeps the spliced identity exact.
    w.difference = diff;
    return w;
}

}  // namespace wireoff
