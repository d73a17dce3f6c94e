#include "wireoff/series.hpp"

#include "wireoff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wireoff {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::Alignment: return "AlignmentError";
        case ErrorKind::Fit: return "FitError";
        case ErrorKind::Tune: return "TuneError";
        case ErrorKind::Validation: return "ValidationError";
        case ErrorKind::Estimation: return "EstimationError";
        case ErrorKind::Simulation: return "SimulationError";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::Gap: return "GapError";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::NotFound: return "NotFoundError";
        case ErrorKind::Conflict: return "ConflictError";
    }
    return "Error";
}

MinuteSeries::MinuteSeries(std::int64_t anchor_epoch_minute, MinuteOffset start_offset, std::vector<double> values)
    : anchor_(anchor_epoch_minute), start_(start_offset), values_(std::move(values)) {}

double MinuteSeries::at(MinuteOffset m) const {
    if (!contains(m)) {
        throw AlignmentError("offset " + std::to_string(m) + " outside series range [" + std::to_string(start_) +
                             ", " + std::to_string(end_offset()) + "]");
    }
    return values_[static_cast<std::size_t>(m - start_)];
}

MinuteSeries MinuteSeries::slice(MinuteOffset first, MinuteOffset last) const {
    if (first > last || !contains(first) || !contains(last)) {
        throw AlignmentError("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                             "] not contained in [" + std::to_string(start_) + ", " + std::to_string(end_offset()) +
                             "]");
    }
    auto begin = values_.begin() + (first - start_);
    auto end = values_.begin() + (last - start_) + 1;
    return MinuteSeries(anchor_, first, std::vector<double>(begin, end));
}

MinuteSeries MinuteSeries::reanchored(std::int64_t new_anchor_epoch_minute) const {
    return MinuteSeries(new_anchor_epoch_minute, start_ + (anchor_ - new_anchor_epoch_minute), values_);
}

VolumeSeries::VolumeSeries(std::string vendor, MinuteSeries s) : vendor_id(std::move(vendor)), series(std::move(s)) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series[i] > 0.0) || !std::isfinite(series[i])) {
            throw DomainError("volume for vendor '" + vendor_id + "' must be positive and finite at offset " +
                              std::to_string(series.offset_of(i)));
        }
    }
}

AvailabilitySeries::AvailabilitySeries(std::string vendor, MinuteSeries s)
    : vendor_id(std::move(vendor)), series(std::move(s)) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series[i] >= 0.0 && series[i] <= 1.0)) {
            throw DomainError("availability for vendor '" + vendor_id + "' outside [0,1] at offset " +
                              std::to_string(series.offset_of(i)));
        }
    }
}

MinuteSeries to_log(const MinuteSeries& series) {
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series[i] > 0.0)) {
            throw DomainError("log undefined for non-positive value at offset " +
                              std::to_string(series.offset_of(i)));
        }
        out[i] = std::log(series[i]);
    }
    return MinuteSeries(series.anchor_epoch_minute(), series.start_offset(), std::move(out));
}

MinuteSeries to_log(const VolumeSeries& series) { return to_log(series.series); }

MinuteSeries exp_series(const MinuteSeries& series) {
    std::vector<double> out(series.size());
    std::transform(series.values().begin(), series.values().end(), out.begin(), [](double v) { return std::exp(v); });
    return MinuteSeries(series.anchor_epoch_minute(), series.start_offset(), std::move(out));
}

std::pair<MinuteSeries, MinuteSeries> align(const MinuteSeries& a, const MinuteSeries& b) {
    if (a.anchor_epoch_minute() != b.anchor_epoch_minute()) {
        throw AlignmentError("series anchored at different epochs (" + std::to_string(a.anchor_epoch_minute()) +
                             " vs " + std::to_string(b.anchor_epoch_minute()) + ")");
    }
    if (a.empty() || b.empty()) throw AlignmentError("cannot align an empty series");
    const MinuteOffset first = std::max(a.start_offset(), b.start_offset());
    const MinuteOffset last = std::min(a.end_offset(), b.end_offset());
    if (first > last) {
        throw AlignmentError("series ranges do not intersect");
    }
    return {a.slice(first, last), b.slice(first, last)};
}

}  // namespace wireoff
