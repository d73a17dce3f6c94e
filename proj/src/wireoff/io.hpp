#pragma once

#include "wireoff/behavior.hpp"
#include "wireoff/diagnostics.hpp"
#include "wireoff/series.hpp"
#include "wireoff/wiredoff.hpp"
#include "wireoff/wiredon.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wireoff {

/// Longest run of missing volume minutes that is filled by interpolation.
inline constexpr std::int64_t kMaxInterpolatedGap = 5;

/// Per-vendor series keyed by vendor id. All series share one anchor: either
/// the requested one or the latest timestamp in the input.
template <typename S>
struct VendorTable {
    std::int64_t anchor_epoch_minute = 0;
    std::map<std::string, S> vendors;

    const S& at(const std::string& vendor) const;
};

using VolumeTable = VendorTable<VolumeSeries>;
using AvailabilityTable = VendorTable<AvailabilitySeries>;

/// `timestamp_minute,vendor_id,count`. Gaps of up to five minutes are linearly
/// interpolated; longer gaps raise GapError.
VolumeTable parse_volumes(std::string_view text, std::optional<std::int64_t> anchor = {});
VolumeTable load_volumes(const std::filesystem::path& path, std::optional<std::int64_t> anchor = {});

/// `timestamp_minute,vendor_id,availability`. Missing minutes are
/// forward-filled; a gap longer than `max_fill` minutes is a ValidationError.
AvailabilityTable parse_availability(std::string_view text, std::optional<std::int64_t> anchor = {},
                                     std::int64_t max_fill = 10);
AvailabilityTable load_availability(const std::filesystem::path& path, std::optional<std::int64_t> anchor = {},
                                    std::int64_t max_fill = 10);

/// `customer_id,timestamp_seconds,vendor_id,outcome`, outcome in {success,failure}.
std::vector<AttemptEvent> parse_events(std::string_view text);
std::vector<AttemptEvent> load_events(const std::filesystem::path& path);

/// `timestamp_minute,W_off,C_n0,C_other` over consecutive minutes of a past
/// wire-off. Series are anchored at the last row.
WireoffHistory parse_wireoff_history(std::string_view text);
WireoffHistory load_wireoff_history(const std::filesystem::path& path);

std::string format_volumes(const VolumeTable& table);
std::string format_availability(const AvailabilityTable& table);
std::string format_events(const std::vector<AttemptEvent>& events);
std::string format_wireoff_history(const WireoffHistory& history);
/// `offset_m,W_on_mean,W_on_p10,W_on_p90,A_n0,A_other,C_other`.
std::string format_wiredon(const WiredOnForecast& forecast);
/// `lag,acf` and `theoretical,sample`.
std::string format_acf(const DiagnosticsReport& report);
std::string format_qq(const DiagnosticsReport& report);

/// Shortest decimal that reads back to the same double (at most 17 digits).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace wireoff
