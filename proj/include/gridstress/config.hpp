#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridstress/calendar.hpp"
#include "gridstress/ingest.hpp"
#include "gridstress/table.hpp"
#include "gridstress/weather_correct.hpp"

namespace gridstress {

struct RegionConfig {
    std::string id;
    std::filesystem::path grid_csv;
    GridCsvSchema schema;
    std::optional<std::filesystem::path> weather_csv;
    std::string weather_timestamp_format = "YYYY-MM-DD HH:MM";
};

struct GridRange {
    double from;
    double to;
    double step = 1.0;
};

struct ModelOptions {
    std::optional<DegreeParams> setpoints;     // fixed setpoints skip the search
    GridRange heating_grid{50.0, 70.0, 1.0};
    GridRange cooling_grid{65.0, 85.0, 1.0};
    SetpointCriterion criterion = SetpointCriterion::StdRelError;
    unsigned workers = 1;
};

struct AlignOptions {
    unsigned month;
    std::string window_a;
    std::string window_b;
};

struct IndicatorOptions {
    int min_coverage = 20;        // peak/trough
    int daily_min_coverage = 24;  // daily totals
    std::optional<Date> trend_anchor;
    std::optional<AlignOptions> align;
};

struct DensityOptions {
    std::optional<double> bandwidth;
    std::size_t grid_points = 512;
};

struct BackcastOptions {
    std::string train = "train";
    std::string event = "event";
    std::string base = "base";
    std::optional<std::string> holdout;  // sigma source; training window when absent
    int daily_min_coverage = 24;
};

/// Declarative analysis setup, read from a JSON file. Relative paths are
/// resolved against the file's directory.
struct AnalysisConfig {
    std::vector<RegionConfig> regions;
    std::map<std::string, DateRange> windows;
    ModelOptions model;
    IndicatorOptions indicators;
    DensityOptions density;
    BackcastOptions backcast;
    std::filesystem::path output_dir = "out";
    OutputFormat format = OutputFormat::Csv;

    const DateRange& window(const std::string& name) const;
    const RegionConfig& region(const std::string& id) const;
};

AnalysisConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
AnalysisConfig load_config(const std::filesystem::path& path);

}  // namespace gridstress
