#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridstress/config.hpp"
#include "gridstress/ingest.hpp"
#include "gridstress/series.hpp"
#include "gridstress/table.hpp"

namespace gridstress {

struct CommandOptions {
    AnalysisConfig config;
    std::optional<std::string> region;  // all regions when empty
    std::vector<std::string> windows;   // meaning depends on the command
    std::string indicator = "ramp_rate";
    TemperatureBounds temperature_bounds;

    OutputFormat format() const { return config.format; }
};

/// Outcome of a command across regions. A failing region does not stop the
/// others; exit_code is the first failure's code, 0 when all succeeded.
struct CommandReport {
    int exit_code = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> failures;
    std::vector<std::filesystem::path> outputs;
};

/// Parsed inputs of one region.
struct RegionData {
    std::map<Variable, HourlySeries> grid;
    std::optional<HourlySeries> temperature;
    std::vector<std::string> warnings;

    const HourlySeries* find(Variable v) const;
};

RegionData load_region(const RegionConfig& region, TemperatureBounds bounds);

/// Normalized CSV per (region, variable) plus a coverage report.
CommandReport cmd_ingest(const CommandOptions& options);

/// Peak/trough, ramp rate, forecast error, interchange and daily totals,
/// with optional trend fit and two-year alignment. One optional window
/// restricts the analysis period.
CommandReport cmd_indicators(const CommandOptions& options);

/// Densities of `indicator` over two named windows on a shared grid.
CommandReport cmd_density(const CommandOptions& options);

/// Setpoint search (or fixed setpoints), model fit, counterfactual over the
/// event window and the daily change table with confidence bands.
CommandReport cmd_backcast(const CommandOptions& options);

/// Names accepted by cmd_density.
const std::vector<std::string>& density_indicators();

}  // namespace gridstress
