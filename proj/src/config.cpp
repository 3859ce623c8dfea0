#include "gridstress/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gridstress/errors.hpp"
#include "json.hpp"

namespace gridstress {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::Config, "config: " + msg); }

Date date_field(const json& j, const std::string& what) {
    if (!j.is_string()) fail(what + " must be a YYYY-MM-DD string");
    auto d = parse_date(j.get<std::string>());
    if (!d) fail(what + ": invalid date '" + j.get<std::string>() + "'");
    return *d;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

GridRange grid_field(const json& j, const std::string& what) {
    GridRange g{j.at("from").get<double>(), j.at("to").get<double>(), j.value("step", 1.0)};
    if (!(g.step > 0.0) || g.to < g.from) fail(what + " needs from <= to and step > 0");
    return g;
}

GridCsvSchema schema_field(const json& j, const std::string& region) {
    GridCsvSchema s;
    s.timestamp_column = j.value("timestamp_column", s.timestamp_column);
    s.timestamp_format = j.value("timestamp_format", s.timestamp_format);
    const std::string delim = j.value("delimiter", std::string(","));
    if (delim == "\\t" || delim == "\t") {
        s.delimiter = '\t';
    } else if (delim.size() == 1) {
        s.delimiter = delim[0];
    } else {
        fail("region '" + region + "': delimiter must be a single character");
    }
    s.decimal_grouping = j.value("decimal_grouping", false);
    if (!j.contains("columns") || !j.at("columns").is_object()) {
        fail("region '" + region + "': schema.columns must map variables to column names");
    }
    for (const auto& [key, value] : j.at("columns").items()) {
        auto var = parse_variable(key);
        if (!var || *var == Variable::Temperature) {
            fail("region '" + region + "': unknown grid variable '" + key + "'");
        }
        s.value_columns[*var] = value.get<std::string>();
    }
    s.validate();
    return s;
}

}  // namespace

const DateRange& AnalysisConfig::window(const std::string& name) const {
    auto it = windows.find(name);
    if (it == windows.end()) fail("unknown window '" + name + "'");
    return it->second;
}

const RegionConfig& AnalysisConfig::region(const std::string& id) const {
    for (const auto& r : regions)
        if (r.id == id) return r;
    fail("unknown region '" + id + "'");
}

AnalysisConfig parse_config(std::string_view text, const fs::path& base_dir) {
    AnalysisConfig cfg;
    try {
        const json j = json::parse(text);

        std::set<std::string> ids;
        std::set<fs::path> paths;
        for (const auto& r : j.at("regions")) {
            RegionConfig rc;
            rc.id = r.at("id").get<std::string>();
            if (rc.id.empty() || rc.id.find_first_of("/\\") != std::string::npos) {
                fail("region id must be a non-empty name without path separators");
            }
            if (!ids.insert(rc.id).second) fail("duplicate region id '" + rc.id + "'");
            rc.grid_csv = resolve(base_dir, r.at("grid_csv").get<std::string>());
            if (!paths.insert(rc.grid_csv.lexically_normal()).second) {
                fail("path " + rc.grid_csv.string() + " is used twice");
            }
            rc.schema = schema_field(r.at("schema"), rc.id);
            if (r.contains("weather_csv") && !r.at("weather_csv").is_null()) {
                rc.weather_csv = resolve(base_dir, r.at("weather_csv").get<std::string>());
                if (!paths.insert(rc.weather_csv->lexically_normal()).second) {
                    fail("path " + rc.weather_csv->string() + " is used twice");
                }
            }
            rc.weather_timestamp_format = r.value("weather_timestamp_format", rc.weather_timestamp_format);
            cfg.regions.push_back(std::move(rc));
        }
        if (cfg.regions.empty()) fail("no regions configured");

        if (j.contains("windows")) {
            for (const auto& [name, w] : j.at("windows").items()) {
                if (!w.is_array() || w.size() != 2) fail("window '" + name + "' must be [first, last]");
                DateRange range{date_field(w[0], "window " + name), date_field(w[1], "window " + name)};
                if (range.days() < 1) fail("window '" + name + "' ends before it starts");
                cfg.windows.emplace(name, range);
            }
        }

        if (j.contains("model")) {
            const json& m = j.at("model");
            if (m.contains("setpoints") && !m.at("setpoints").is_null()) {
                DegreeParams p{m.at("setpoints").at("heating").get<double>(),
                               m.at("setpoints").at("cooling").get<double>()};
                p.validate();
                cfg.model.setpoints = p;
            }
            if (m.contains("heating_grid")) cfg.model.heating_grid = grid_field(m.at("heating_grid"), "heating_grid");
            if (m.contains("cooling_grid")) cfg.model.cooling_grid = grid_field(m.at("cooling_grid"), "cooling_grid");
            const std::string crit = m.value("criterion", std::string("std_rel_error"));
            if (crit == "std_rel_error") cfg.model.criterion = SetpointCriterion::StdRelError;
            else if (crit == "ssr") cfg.model.criterion = SetpointCriterion::Ssr;
            else fail("criterion must be std_rel_error or ssr");
            cfg.model.workers = m.value("workers", 1u);
        }

        if (j.contains("indicators")) {
            const json& ind = j.at("indicators");
            cfg.indicators.min_coverage = ind.value("min_coverage", cfg.indicators.min_coverage);
            cfg.indicators.daily_min_coverage = ind.value("daily_min_coverage", cfg.indicators.daily_min_coverage);
            if (cfg.indicators.min_coverage < 1 || cfg.indicators.min_coverage > 24 ||
                cfg.indicators.daily_min_coverage < 0 || cfg.indicators.daily_min_coverage > 24) {
                fail("indicator coverage thresholds must lie in 1..24");
            }
            if (ind.contains("trend_anchor")) cfg.indicators.trend_anchor = date_field(ind.at("trend_anchor"), "trend_anchor");
            if (ind.contains("align")) {
                const json& a = ind.at("align");
                AlignOptions opt{a.at("month").get<unsigned>(), a.at("window_a").get<std::string>(),
                                 a.at("window_b").get<std::string>()};
                if (opt.month < 1 || opt.month > 12) fail("align.month must be 1..12");
                cfg.indicators.align = opt;
            }
        }

        if (j.contains("density")) {
            const json& d = j.at("density");
            if (d.contains("bandwidth") && !d.at("bandwidth").is_null()) {
                cfg.density.bandwidth = d.at("bandwidth").get<double>();
                if (!(*cfg.density.bandwidth > 0.0)) fail("density.bandwidth must be positive");
            }
            cfg.density.grid_points = d.value("grid_points", cfg.density.grid_points);
            if (cfg.density.grid_points < 2) fail("density.grid_points must be at least 2");
        }

        if (j.contains("backcast")) {
            const json& b = j.at("backcast");
            cfg.backcast.train = b.value("train", cfg.backcast.train);
            cfg.backcast.event = b.value("event", cfg.backcast.event);
            cfg.backcast.base = b.value("base", cfg.backcast.base);
            if (b.contains("holdout") && !b.at("holdout").is_null()) cfg.backcast.holdout = b.at("holdout").get<std::string>();
            cfg.backcast.daily_min_coverage = b.value("daily_min_coverage", cfg.backcast.daily_min_coverage);
            if (cfg.backcast.daily_min_coverage < 1 || cfg.backcast.daily_min_coverage > 24) {
                fail("backcast.daily_min_coverage must lie in 1..24");
            }
        }

        if (j.contains("output")) {
            const json& o = j.at("output");
            if (o.contains("dir")) cfg.output_dir = resolve(base_dir, o.at("dir").get<std::string>());
            else cfg.output_dir = base_dir / "out";
            const std::string fmt = o.value("format", std::string("csv"));
            if (fmt == "csv") cfg.format = OutputFormat::Csv;
            else if (fmt == "json") cfg.format = OutputFormat::Json;
            else fail("output.format must be csv or json");
        } else {
            cfg.output_dir = base_dir / "out";
        }
    } catch (const json::exception& e) {
        fail(e.what());
    }
    return cfg;
}

AnalysisConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

}  // namespace gridstress
