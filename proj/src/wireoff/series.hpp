#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wireoff {

/// Signed minutes relative to the anchor t0: negative is history, 0 is now,
/// positive is the future.
using MinuteOffset = std::int64_t;

/// A point in time at minute granularity, expressed as an offset from an
/// anchor epoch minute (UTC minutes since 1970-01-01).
struct TimeIndex {
    std::int64_t anchor_epoch_minute = 0;
    MinuteOffset offset = 0;

    std::int64_t epoch_minute() const noexcept { return anchor_epoch_minute + offset; }

    static TimeIndex from_epoch(std::int64_t anchor_epoch_minute, std::int64_t epoch_minute) noexcept {
        return {anchor_epoch_minute, epoch_minute - anchor_epoch_minute};
    }

    friend bool operator==(const TimeIndex&, const TimeIndex&) = default;
};

/// Observations at consecutive minute offsets [start_offset, end_offset].
class MinuteSeries {
public:
    MinuteSeries() = default;
    MinuteSeries(std::int64_t anchor_epoch_minute, MinuteOffset start_offset, std::vector<double> values);

    std::int64_t anchor_epoch_minute() const noexcept { return anchor_; }
    MinuteOffset start_offset() const noexcept { return start_; }
    MinuteOffset end_offset() const noexcept { return start_ + static_cast<MinuteOffset>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    bool contains(MinuteOffset m) const noexcept { return !empty() && m >= start_ && m <= end_offset(); }
    /// Value at offset m; throws AlignmentError when m is outside the range.
    double at(MinuteOffset m) const;
    MinuteOffset offset_of(std::size_t i) const noexcept { return start_ + static_cast<MinuteOffset>(i); }

    /// Restriction to [first, last]; throws AlignmentError when not contained.
    MinuteSeries slice(MinuteOffset first, MinuteOffset last) const;

    /// Same instants expressed against a different anchor.
    MinuteSeries reanchored(std::int64_t new_anchor_epoch_minute) const;

    /// Same instants re-anchored so that the last observation sits at offset 0.
    MinuteSeries anchored_at_end() const { return reanchored(anchor_ + end_offset()); }

    friend bool operator==(const MinuteSeries&, const MinuteSeries&) = default;

private:
    std::int64_t anchor_ = 0;
    MinuteOffset start_ = 0;
    std::vector<double> values_;
};

/// Customer experiences per minute for one vendor; strictly positive.
struct VolumeSeries {
    std::string vendor_id;
    MinuteSeries series;

    VolumeSeries() = default;
    VolumeSeries(std::string vendor, MinuteSeries s);
};

/// Probability of a successful first attempt, per minute; values in [0, 1].
struct AvailabilitySeries {
    std::string vendor_id;
    MinuteSeries series;

    AvailabilitySeries() = default;
    AvailabilitySeries(std::string vendor, MinuteSeries s);
};

/// Elementwise natural log. Throws DomainError naming the first non-positive
/// offset.
MinuteSeries to_log(const MinuteSeries& series);
MinuteSeries to_log(const VolumeSeries& series);

MinuteSeries exp_series(const MinuteSeries& series);

/// Restricts both series to the intersection of their offset ranges.
std::pair<MinuteSeries, MinuteSeries> align(const MinuteSeries& a, const MinuteSeries& b);

}  // namespace wireoff
