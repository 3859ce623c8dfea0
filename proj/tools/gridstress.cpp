#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridstress/commands.hpp"
#include "gridstress/config.hpp"
#include "gridstress/errors.hpp"

using namespace gridstress;

namespace {

struct Args {
    std::string config;
    std::string region;
    std::vector<std::string> windows;
    std::string format;
    std::string out;
    std::string indicator = "ramp_rate";
    double temp_min = TemperatureBounds{}.lo;
    double temp_max = TemperatureBounds{}.hi;
};

void add_common(CLI::App* cmd, Args& args) {
    cmd->add_option("-c,--config", args.config, "Analysis config (JSON)")->required();
    cmd->add_option("-r,--region", args.region, "Run a single region");
    cmd->add_option("-w,--window", args.windows, "Named window(s) from the config");
    cmd->add_option("-f,--format", args.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-o,--out", args.out, "Output directory (overrides config)");
    cmd->add_option("--temp-min", args.temp_min, "Lowest plausible temperature, degF");
    cmd->add_option("--temp-max", args.temp_max, "Highest plausible temperature, degF");
}

int run(const std::string& command, const Args& args) {
    CommandOptions options;
    try {
        options.config = load_config(args.config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    if (!args.region.empty()) options.region = args.region;
    if (!args.out.empty()) options.config.output_dir = args.out;
    if (args.format == "csv") options.config.format = OutputFormat::Csv;
    if (args.format == "json") options.config.format = OutputFormat::Json;
    options.windows = args.windows;
    options.indicator = args.indicator;
    options.temperature_bounds = {args.temp_min, args.temp_max};

    CommandReport report;
    if (command == "ingest") report = cmd_ingest(options);
    else if (command == "indicators") report = cmd_indicators(options);
    else if (command == "density") report = cmd_density(options);
    else report = cmd_backcast(options);

    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : report.failures) std::cerr << "error: " << f << '\n';
    for (const auto& p : report.outputs) std::cout << p.string() << '\n';
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid stress analysis: ingest, indicators, densities and weather-corrected backcasts"};
    app.require_subcommand(1);

    Args args;
    auto* ingest = app.add_subcommand("ingest", "Normalize inputs and report coverage");
    auto* indicators = app.add_subcommand("indicators", "Compute operational indicators");
    auto* density = app.add_subcommand("density", "Compare an indicator's density across two windows");
    auto* backcast = app.add_subcommand("backcast", "Fit the demand model and backcast an event window");
    for (auto* cmd : {ingest, indicators, density, backcast}) add_common(cmd, args);
    density->add_option("-i,--indicator", args.indicator, "Indicator to compare")
        ->check(CLI::IsMember(density_indicators()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (auto* cmd : {ingest, indicators, density, backcast}) {
        if (cmd->parsed()) {
            try {
                return run(cmd->get_name(), args);
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return exit_code(e.kind());
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 4;
            }
        }
    }
    return 2;
}
