#include "gridstress/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gridstress/errors.hpp"

namespace gridstress {

using namespace std::chrono;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Reads one line, dropping a trailing CR and a leading UTF-8 BOM on line 1.
bool read_line(std::istream& in, std::string& line, std::size_t line_no) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    return true;
}

std::string where(std::string_view source, std::size_t line_no) {
    return std::string(source) + ":" + std::to_string(line_no);
}

Sample parse_number(std::string_view cell, bool grouping) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    std::string buf;
    if (grouping) {
        buf.reserve(cell.size());
        for (char c : cell)
            if (c != ',') buf.push_back(c);
        cell = buf;
    }
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::size_t find_column(const std::vector<std::string>& header, std::string_view name,
                        std::string_view source) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw Error(ErrorKind::Schema,
                where(source, 1) + ": header is missing column '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> split_record(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

std::string format_roundtrip(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void GridCsvSchema::validate() const {
    if (trim(timestamp_column).empty()) {
        throw Error(ErrorKind::Schema, "schema has no timestamp column");
    }
    if (value_columns.empty()) {
        throw Error(ErrorKind::Schema, "schema declares no value columns");
    }
    if ((delimiter >= '0' && delimiter <= '9') || delimiter == '"' || delimiter == '\n') {
        throw Error(ErrorKind::Schema, std::string("invalid delimiter '") + delimiter + "'");
    }
    TimestampFormat{timestamp_format};  // throws on an unknown layout
}

GridParseResult parse_grid_csv(std::istream& in, const GridCsvSchema& schema,
                               const std::string& region_id, std::string_view source_name) {
    schema.validate();
    const TimestampFormat format(schema.timestamp_format);

    std::string line;
    std::size_t line_no = 1;
    if (!read_line(in, line, line_no)) {
        throw Error(ErrorKind::EmptyInput, where(source_name, 1) + ": no header row");
    }
    const auto header = split_record(line, schema.delimiter);
    const std::size_t ts_col = find_column(header, schema.timestamp_column, source_name);
    std::vector<std::pair<Variable, std::size_t>> cols;
    for (const auto& [var, name] : schema.value_columns) {
        cols.emplace_back(var, find_column(header, name, source_name));
    }

    GridParseResult result;
    std::vector<HourStamp> stamps;
    std::vector<std::vector<Sample>> values(cols.size());
    std::size_t bad_timestamps = 0;

    while (read_line(in, line, ++line_no)) {
        if (trim(line).empty()) continue;
        const auto cells = split_record(line, schema.delimiter);
        if (ts_col >= cells.size()) {
            ++bad_timestamps;
            continue;
        }
        auto ts = format.parse(trim(cells[ts_col]));
        if (!ts) {
            ++bad_timestamps;
            continue;
        }
        HourStamp h;
        try {
            h = to_hour(*ts);
        } catch (const Error& e) {
            throw Error(ErrorKind::Alignment, where(source_name, line_no) + ": " + e.what());
        }
        if (!stamps.empty()) {
            if (h < stamps.back()) {
                throw Error(ErrorKind::Order, where(source_name, line_no) + ": timestamp " +
                                                  format_hour(h) + " precedes " +
                                                  format_hour(stamps.back()) + " (row " +
                                                  std::to_string(line_no - 1) + ")");
            }
            if (h == stamps.back()) {
                result.warnings.push_back(where(source_name, line_no) + ": duplicate hour " +
                                          format_hour(h) + " dropped");
                continue;
            }
        }
        stamps.push_back(h);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const std::size_t idx = cols[c].second;
            values[c].push_back(idx < cells.size() ? parse_number(cells[idx], schema.decimal_grouping)
                                                   : std::nullopt);
        }
    }

    if (stamps.empty()) {
        throw Error(ErrorKind::EmptyInput, std::string(source_name) + ": no parseable rows");
    }
    if (bad_timestamps > 0) {
        result.warnings.push_back(std::string(source_name) + ": skipped " +
                                  std::to_string(bad_timestamps) +
                                  " row(s) with unparseable timestamps");
    }

    const HourStamp start = stamps.front();
    const auto length = static_cast<std::size_t>((stamps.back() - start).count()) + 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        std::vector<Sample> filled(length);
        for (std::size_t r = 0; r < stamps.size(); ++r) {
            filled[static_cast<std::size_t>((stamps[r] - start).count())] = values[c][r];
        }
        result.series.emplace(cols[c].first,
                              HourlySeries(region_id, cols[c].first, start, std::move(filled)));
    }
    return result;
}

std::vector<WeatherObservation> parse_weather_csv(std::istream& in, std::string_view source_name,
                                                  std::string_view timestamp_format,
                                                  char delimiter) {
    const TimestampFormat format(timestamp_format);
    std::string line;
    std::size_t line_no = 1;
    if (!read_line(in, line, line_no)) {
        throw Error(ErrorKind::EmptyInput, where(source_name, 1) + ": no header row");
    }
    const auto header = split_record(line, delimiter);
    const std::size_t ts_col = find_column(header, "timestamp", source_name);
    const std::size_t t_col = find_column(header, "temperature_degF", source_name);

    std::vector<WeatherObservation> out;
    while (read_line(in, line, ++line_no)) {
        if (trim(line).empty()) continue;
        const auto cells = split_record(line, delimiter);
        if (ts_col >= cells.size()) {
            throw Error(ErrorKind::Schema, where(source_name, line_no) + ": missing timestamp");
        }
        auto ts = format.parse(trim(cells[ts_col]));
        if (!ts) {
            throw Error(ErrorKind::Schema, where(source_name, line_no) +
                                               ": unparseable timestamp '" + cells[ts_col] + "'");
        }
        Sample temp = t_col < cells.size() ? parse_number(cells[t_col], false) : std::nullopt;
        if (!temp) continue;
        out.push_back({*ts, *temp});
    }
    if (out.empty()) {
        throw Error(ErrorKind::EmptyInput, std::string(source_name) + ": no observations");
    }
    return out;
}

HourlySeries hourly_mean_temperature(std::span<const WeatherObservation> observations,
                                     const std::string& region_id, TemperatureBounds bounds) {
    std::vector<std::string> offending;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const double t = observations[i].temperature;
        if (!(t >= bounds.lo && t <= bounds.hi)) {
            std::ostringstream msg;
            msg << "observation " << i + 1 << " (" << format_roundtrip(t) << " degF)";
            offending.push_back(msg.str());
        }
    }
    if (!offending.empty()) {
        std::string msg = "temperatures outside [" + format_roundtrip(bounds.lo) + ", " +
                          format_roundtrip(bounds.hi) + "] degF:";
        for (const auto& o : offending) msg += " " + o + ";";
        throw Error(ErrorKind::Validation, msg);
    }
    if (observations.empty()) {
        return HourlySeries(region_id, Variable::Temperature, HourStamp{}, {});
    }

    // Hour-ending bucket: ceil to the hour, so :00 belongs to the hour it ends.
    auto bucket = [](Timestamp t) { return ceil<hours>(t); };
    HourStamp first = bucket(observations.front().timestamp);
    HourStamp last = first;
    for (const auto& o : observations) {
        first = std::min(first, bucket(o.timestamp));
        last = std::max(last, bucket(o.timestamp));
    }
    const auto length = static_cast<std::size_t>((last - first).count()) + 1;
    // Sum each bucket in sorted value order so the mean does not depend on
    // the order observations arrive in.
    std::vector<std::vector<double>> buckets(length);
    for (const auto& o : observations) {
        buckets[static_cast<std::size_t>((bucket(o.timestamp) - first).count())].push_back(
            o.temperature);
    }
    std::vector<Sample> values(length);
    for (std::size_t i = 0; i < length; ++i) {
        auto& b = buckets[i];
        if (b.empty()) continue;
        std::sort(b.begin(), b.end());
        double acc = 0.0;
        for (double v : b) acc += v;
        values[i] = acc / static_cast<double>(b.size());
    }
    return HourlySeries(region_id, Variable::Temperature, first, std::move(values));
}

CoverageReport coverage_report(const HourlySeries& series, HourStamp first, HourStamp last) {
    CoverageReport report;
    std::size_t run = 0;
    for (HourStamp t = first; t <= last; t += hours{1}) {
        if (series.at(t)) {
            ++report.present;
            run = 0;
            continue;
        }
        ++report.missing;
        report.longest_gap = std::max(report.longest_gap, ++run);
        const Date d = day_of(t);
        if (report.missing_days.empty() || report.missing_days.back() != d) {
            report.missing_days.push_back(d);
        }
    }
    return report;
}

CoverageReport coverage_report(const HourlySeries& series) {
    if (series.empty()) return {};
    return coverage_report(series, series.start(), series.end());
}

void write_series_csv(std::ostream& out, const HourlySeries& series) {
    out << "timestamp," << to_string(series.variable()) << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_hour(series.stamp(i)) << ',';
        if (series[i]) out << format_roundtrip(*series[i]);
        out << '\n';
    }
}

GridCsvSchema normalized_schema(Variable variable) {
    GridCsvSchema schema;
    schema.value_columns[variable] = to_string(variable);
    return schema;
}

}  // namespace gridstress
