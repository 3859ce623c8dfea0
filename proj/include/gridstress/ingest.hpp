#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridstress/calendar.hpp"
#include "gridstress/series.hpp"

namespace gridstress {

/// Column layout of an hourly grid export (EIA Hourly Electric Grid Monitor
/// and similar). Timestamps are hour ending, local clock time.
struct GridCsvSchema {
    std::string timestamp_column = "timestamp";
    std::string timestamp_format = "YYYY-MM-DD HH:MM";
    std::map<Variable, std::string> value_columns;
    char delimiter = ',';
    bool decimal_grouping = false;  // values may carry thousands separators

    /// Throws Schema when the layout is unusable.
    void validate() const;
};

struct GridParseResult {
    std::map<Variable, HourlySeries> series;
    std::vector<std::string> warnings;
};

/// Parses a delimited grid export into one hour-contiguous series per
/// declared variable. Unparseable or empty cells become MISSING, as do hours
/// absent from the file. A repeated timestamp keeps its first row.
GridParseResult parse_grid_csv(std::istream& in, const GridCsvSchema& schema,
                               const std::string& region_id,
                               std::string_view source_name = "<input>");

struct WeatherObservation {
    Timestamp timestamp;
    double temperature;  // degF
};

struct TemperatureBounds {
    double lo = -60.0;
    double hi = 140.0;
};

/// Reads a weather CSV with columns `timestamp` and `temperature_degF`.
/// Rows with an empty temperature are dropped.
std::vector<WeatherObservation> parse_weather_csv(std::istream& in,
                                                  std::string_view source_name = "<input>",
                                                  std::string_view timestamp_format = "YYYY-MM-DD HH:MM",
                                                  char delimiter = ',');

/// Buckets observations into hour-ending intervals (t-1h, t] and averages
/// each bucket. Empty buckets between the first and last covered hour are
/// MISSING. Throws Validation listing every observation outside `bounds`.
HourlySeries hourly_mean_temperature(std::span<const WeatherObservation> observations,
                                     const std::string& region_id,
                                     TemperatureBounds bounds = {});

struct CoverageReport {
    std::size_t present = 0;
    std::size_t missing = 0;
    std::size_t longest_gap = 0;     // longest run of consecutive MISSING hours
    std::vector<Date> missing_days;  // days with at least one MISSING hour
};

/// Coverage over [first, last]; hours outside the series count as missing.
CoverageReport coverage_report(const HourlySeries& series, HourStamp first, HourStamp last);
CoverageReport coverage_report(const HourlySeries& series);

/// Writes `timestamp,<variable>` rows with shortest round-trip decimals and
/// an empty cell for MISSING. parse_grid_csv reads it back unchanged.
void write_series_csv(std::ostream& out, const HourlySeries& series);

/// Schema matching write_series_csv output for `variable`.
GridCsvSchema normalized_schema(Variable variable);

/// Shortest decimal string that parses back to the same double.
std::string format_roundtrip(double value);

/// Splits one delimited record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line, char delimiter);

}  // namespace gridstress
