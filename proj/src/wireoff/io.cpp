#include "wireoff/io.hpp"

#include "wireoff/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace wireoff {

template <typename S>
const S& VendorTable<S>::at(const std::string& vendor) const {
    auto it = vendors.find(vendor);
    if (it == vendors.end()) throw NotFoundError("vendor '" + vendor + "' not present in input");
    return it->second;
}

template struct VendorTable<VolumeSeries>;
template struct VendorTable<AvailabilitySeries>;

namespace {

struct CsvRow {
    long line = 0;
    std::vector<std::string_view> fields;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

// Splits text into rows, checks the header and the field count of each row.
std::vector<CsvRow> read_csv(std::string_view text, std::string_view header) {
    std::vector<CsvRow> rows;
    long line = 0;
    bool seen_header = false;
    const std::size_t width = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line;
        if (line == 1 && raw.size() >= 3 && raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
        if (raw.empty()) {
            if (end >= text.size()) break;
            continue;
        }
        if (!seen_header) {
            if (raw != header) {
                throw ParseError("expected header '" + std::string(header) + "', found '" + std::string(raw) + "'",
                                 line);
            }
            seen_header = true;
            continue;
        }
        CsvRow row{line, {}};
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = raw.find(',', start);
            row.fields.push_back(trim(raw.substr(start, comma == std::string_view::npos ? comma : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (row.fields.size() != width) {
            throw ParseError("line " + std::to_string(line) + ": expected " + std::to_string(width) + " fields, got " +
                                 std::to_string(row.fields.size()),
                             line);
        }
        rows.push_back(std::move(row));
        if (end >= text.size()) break;
    }
    if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'", 1);
    return rows;
}

std::int64_t parse_int(std::string_view s, long line, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(s) + "'", line);
    }
    return v;
}

double parse_real(std::string_view s, long line, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(s) + "'", line);
    }
    return v;
}

bool valid_id(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string parse_id(std::string_view s, long line, const char* what) {
    if (!valid_id(s)) {
        throw ParseError("line " + std::to_string(line) + ": invalid " + what + " '" + std::string(s) + "'", line);
    }
    return std::string(s);
}

using Points = std::map<std::int64_t, double>;

std::map<std::string, Points> collect(const std::vector<CsvRow>& rows, const char* value_name,
                                      const std::function<void(double, long)>& check) {
    std::map<std::string, Points> out;
    for (const auto& row : rows) {
        const std::int64_t ts = parse_int(row.fields[0], row.line, "timestamp_minute");
        std::string vendor = parse_id(row.fields[1], row.line, "vendor_id");
        const double v = parse_real(row.fields[2], row.line, value_name);
        check(v, row.line);
        auto& pts = out[vendor];
        if (!pts.emplace(ts, v).second) {
            throw ParseError("line " + std::to_string(row.line) + ": duplicate minute " + std::to_string(ts) +
                                 " for vendor '" + vendor + "'",
                             row.line);
        }
    }
    if (out.empty()) throw ValidationError("input contains no data rows");
    return out;
}

std::int64_t resolve_anchor(const std::map<std::string, Points>& data, std::optional<std::int64_t> anchor) {
    if (anchor) return *anchor;
    std::int64_t latest = data.begin()->second.rbegin()->first;
    for (const auto& [vendor, pts] : data) latest = std::max(latest, pts.rbegin()->first);
    return latest;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

VolumeTable parse_volumes(std::string_view text, std::optional<std::int64_t> anchor) {
    const auto rows = read_csv(text, "timestamp_minute,vendor_id,count");
    const auto data = collect(rows, "count", [](double v, long line) {
        if (!(v > 0.0)) throw DomainError("line " + std::to_string(line) + ": volume must be positive");
    });
    VolumeTable table;
    table.anchor_epoch_minute = resolve_anchor(data, anchor);
    for (const auto& [vendor, pts] : data) {
        std::vector<double> values;
        auto it = pts.begin();
        values.push_back(it->second);
        for (auto prev = it++; it != pts.end(); prev = it++) {
            const std::int64_t missing = it->first - prev->first - 1;
            if (missing > kMaxInterpolatedGap) {
                throw GapError("vendor '" + vendor + "' is missing minutes " + std::to_string(prev->first + 1) + ".." +
                                   std::to_string(it->first - 1),
                               vendor, prev->first + 1, it->first - 1);
            }
            for (std::int64_t j = 1; j <= missing; ++j) {
                const double w = static_cast<double>(j) / static_cast<double>(missing + 1);
                values.push_back(prev->second + w * (it->second - prev->second));
            }
            values.push_back(it->second);
        }
        const MinuteOffset start = pts.begin()->first - table.anchor_epoch_minute;
        table.vendors.emplace(vendor,
                              VolumeSeries(vendor, MinuteSeries(table.anchor_epoch_minute, start, std::move(values))));
    }
    return table;
}

VolumeTable load_volumes(const std::filesystem::path& path, std::optional<std::int64_t> anchor) {
    return parse_volumes(read_file(path), anchor);
}

AvailabilityTable parse_availability(std::string_view text, std::optional<std::int64_t> anchor,
                                     std::int64_t max_fill) {
    const auto rows = read_csv(text, "timestamp_minute,vendor_id,availability");
    const auto data = collect(rows, "availability", [](double v, long line) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("line " + std::to_string(line) + ": availability outside [0,1]");
    });
    AvailabilityTable table;
    table.anchor_epoch_minute = resolve_anchor(data, anchor);
    for (const auto& [vendor, pts] : data) {
        std::vector<double> values;
        auto it = pts.begin();
        values.push_back(it->second);
        for (auto prev = it++; it != pts.end(); prev = it++) {
            const std::int64_t missing = it->first - prev->first - 1;
            if (missing > max_fill) {
                throw ValidationError("availability for vendor '" + vendor + "' is missing minutes " +
                                      std::to_string(prev->first + 1) + ".." + std::to_string(it->first - 1) +
                                      " (more than " + std::to_string(max_fill) + ")");
            }
            values.insert(values.end(), static_cast<std::size_t>(missing), prev->second);
            values.push_back(it->second);
        }
        const MinuteOffset start = pts.begin()->first - table.anchor_epoch_minute;
        table.vendors.emplace(
            vendor, AvailabilitySeries(vendor, MinuteSeries(table.anchor_epoch_minute, start, std::move(values))));
    }
    return table;
}

AvailabilityTable load_availability(const std::filesystem::path& path, std::optional<std::int64_t> anchor,
                                    std::int64_t max_fill) {
    return parse_availability(read_file(path), anchor, max_fill);
}

std::vector<AttemptEvent> parse_events(std::string_view text) {
    const auto rows = read_csv(text, "customer_id,timestamp_seconds,vendor_id,outcome");
    std::vector<AttemptEvent> events;
    events.reserve(rows.size());
    for (const auto& row : rows) {
        AttemptEvent e;
        e.customer_id = parse_id(row.fields[0], row.line, "customer_id");
        e.timestamp_seconds = parse_int(row.fields[1], row.line, "timestamp_seconds");
        e.vendor_id = parse_id(row.fields[2], row.line, "vendor_id");
        if (row.fields[3] == "success") {
            e.outcome = AttemptOutcome::Success;
        } else if (row.fields[3] == "failure") {
            e.outcome = AttemptOutcome::Failure;
        } else {
            throw ParseError("line " + std::to_string(row.line) + ": outcome must be success or failure", row.line);
        }
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<AttemptEvent> load_events(const std::filesystem::path& path) { return parse_events(read_file(path)); }

WireoffHistory parse_wireoff_history(std::string_view text) {
    const auto rows = read_csv(text, "timestamp_minute,W_off,C_n0,C_other");
    if (rows.empty()) throw ValidationError("wire-off history has no rows");
    std::vector<double> w, cp, co;
    std::int64_t first = 0;
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::int64_t ts = parse_int(row.fields[0], row.line, "timestamp_minute");
        if (i == 0) {
            first = ts;
        } else if (ts != prev + 1) {
            throw GapError("wire-off history must cover consecutive minutes (line " + std::to_string(row.line) + ")",
                           "wireoff_history", prev + 1, ts - 1);
        }
        prev = ts;
        w.push_back(parse_real(row.fields[1], row.line, "W_off"));
        cp.push_back(parse_real(row.fields[2], row.line, "C_n0"));
        co.push_back(parse_real(row.fields[3], row.line, "C_other"));
    }
    const std::int64_t anchor = prev;
    const MinuteOffset start = first - anchor;
    return {MinuteSeries(anchor, start, std::move(w)), MinuteSeries(anchor, start, std::move(cp)),
            MinuteSeries(anchor, start, std::move(co))};
}

WireoffHistory load_wireoff_history(const std::filesystem::path& path) {
    return parse_wireoff_history(read_file(path));
}

namespace {

template <typename Table>
std::string format_table(const Table& table, const char* header) {
    std::string out = std::string(header) + "\n";
    for (const auto& [vendor, s] : table.vendors) {
        const auto& series = s.series;
        for (std::size_t i = 0; i < series.size(); ++i) {
            out += std::to_string(series.anchor_epoch_minute() + series.offset_of(i));
            out += ',';
            out += vendor;
            out += ',';
            out += format_double(series[i]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace

std::string format_volumes(const VolumeTable& table) {
    return format_table(table, "timestamp_minute,vendor_id,count");
}

std::string format_availability(const AvailabilityTable& table) {
    return format_table(table, "timestamp_minute,vendor_id,availability");
}

std::string format_events(const std::vector<AttemptEvent>& events) {
    std::string out = "customer_id,timestamp_seconds,vendor_id,outcome\n";
    for (const auto& e : events) {
        out += e.customer_id;
        out += ',';
        out += std::to_string(e.timestamp_seconds);
        out += ',';
        out += e.vendor_id;
        out += e.outcome == AttemptOutcome::Success ? ",success\n" : ",failure\n";
    }
    return out;
}

std::string format_wireoff_history(const WireoffHistory& h) {
    std::string out = "timestamp_minute,W_off,C_n0,C_other\n";
    for (std::size_t i = 0; i < h.w_off.size(); ++i) {
        out += std::to_string(h.w_off.anchor_epoch_minute() + h.w_off.offset_of(i));
        out += ',' + format_double(h.w_off[i]) + ',' + format_double(h.c_problematic[i]) + ',' + format_double(h.c_other[i]) + '\n';
    }
    return out;
}

std::string format_wiredon(const WiredOnForecast& f) {
    std::string out = "offset_m,W_on_mean,W_on_p10,W_on_p90,A_n0,A_other,C_other\n";
    for (std::size_t i = 0; i < f.w_on_mean.size(); ++i) {
        out += std::to_string(i + 1);
        for (double v : {f.w_on_mean[i], f.w_on_p10[i], f.w_on_p90[i], f.a_problematic[i], f.a_other[i], f.c_other[i]}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string format_acf(const DiagnosticsReport& report) {
    std::string out = "lag,acf\n";
    for (std::size_t i = 0; i < report.acf.size(); ++i) out += std::to_string(i) + ',' + format_double(report.acf[i]) + '\n';
    return out;
}

std::string format_qq(const DiagnosticsReport& report) {
    std::string out = "theoretical,sample\n";
    for (const auto& p : report.qq) out += format_double(p.theoretical) + ',' + format_double(p.sample) + '\n';
    return out;
}

}  // namespace wireoff
