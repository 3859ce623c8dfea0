#include "gridstress/commands.hpp"

#include <fstream>
#include <functional>

#include "gridstress/density.hpp"
#include "gridstress/errors.hpp"
#include "gridstress/indicators.hpp"
#include "gridstress/model_io.hpp"
#include "gridstress/weather_correct.hpp"

namespace gridstress {

namespace fs = std::filesystem;
using namespace std::chrono;

namespace {

Cell cell(const Sample& s) { return s ? Cell(*s) : Cell(); }
Cell cell(double v) { return Cell(v); }
Cell cell(std::size_t v) { return Cell(static_cast<long long>(v)); }
Cell cell(int v) { return Cell(static_cast<long long>(v)); }
Cell cell(long long v) { return Cell(v); }

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot open " + path.string());
    return in;
}

fs::path region_dir(const CommandOptions& options, const RegionConfig& region) {
    return options.config.output_dir / region.id;
}

void for_each_region(const CommandOptions& options, CommandReport& report,
                     const std::function<void(const RegionConfig&)>& body) {
    std::vector<const RegionConfig*> selected;
    if (options.region) {
        try {
            selected.push_back(&options.config.region(*options.region));
        } catch (const Error& e) {
            report.failures.push_back(e.what());
            report.exit_code = exit_code(e.kind());
            return;
        }
    } else {
        for (const auto& r : options.config.regions) selected.push_back(&r);
    }
    for (const RegionConfig* region : selected) {
        try {
            body(*region);
        } catch (const Error& e) {
            report.failures.push_back("region " + region->id + ": " + to_string(e.kind()) + ": " + e.what());
            if (report.exit_code == 0) report.exit_code = exit_code(e.kind());
        } catch (const fs::filesystem_error& e) {
            report.failures.push_back("region " + region->id + ": " + e.what());
            if (report.exit_code == 0) report.exit_code = 2;
        }
    }
}

void emit(CommandReport& report, const fs::path& dir, const Table& table, OutputFormat format) {
    report.outputs.push_back(write_table_file(dir, table, format));
}

Table hourly_table(const std::string& name, const std::string& value_column, const HourlySeries& s) {
    Table t{name, {"timestamp", value_column}, {}};
    t.rows.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) t.rows.push_back({format_hour(s.stamp(i)), cell(s[i])});
    return t;
}

Table daily_table(const std::string& name, const std::string& value_column, const DailySeries& s) {
    Table t{name, {"date", value_column, "coverage"}, {}};
    for (std::size_t i = 0; i < s.size(); ++i) {
        t.rows.push_back({format_date(s.dates()[i]), cell(s.values()[i]), cell(s.coverage()[i])});
    }
    return t;
}

// Hours outside `a`'s range or missing in either series become MISSING.
HourlySeries mask_joint(const HourlySeries& a, const HourlySeries& b) {
    std::vector<Sample> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b.at(a.stamp(i))) out[i] = a[i];
    }
    return HourlySeries(a.region_id(), a.variable(), a.start(), std::move(out));
}

HourlySeries require_window(const HourlySeries& series, const DateRange& range, const std::string& name) {
    HourlySeries s = series.slice(range);
    if (s.present_count() == 0) {
        throw Error(ErrorKind::InsufficientData,
                    "window '" + name + "' has no " + to_string(series.variable()) + " data");
    }
    return s;
}

}  // namespace

const HourlySeries* RegionData::find(Variable v) const {
    if (v == Variable::Temperature) return temperature ? &*temperature : nullptr;
    auto it = grid.find(v);
    return it == grid.end() ? nullptr : &it->second;
}

RegionData load_region(const RegionConfig& region, TemperatureBounds bounds) {
    RegionData data;
    {
        auto in = open_input(region.grid_csv);
        auto parsed = parse_grid_csv(in, region.schema, region.id, region.grid_csv.string());
        data.grid = std::move(parsed.series);
        data.warnings = std::move(parsed.warnings);
    }
    if (region.weather_csv) {
        auto in = open_input(*region.weather_csv);
        const auto obs = parse_weather_csv(in, region.weather_csv->string(), region.weather_timestamp_format);
        try {
            data.temperature = hourly_mean_temperature(obs, region.id, bounds);
        } catch (const Error& e) {
            throw Error(e.kind(), region.weather_csv->string() + ": " + e.what());
        }
    }
    return data;
}

// ---------------------------------------------------------------------------

CommandReport cmd_ingest(const CommandOptions& options) {
    CommandReport report;
    std::optional<DateRange> window;
    if (!options.windows.empty()) window = options.config.window(options.windows.front());

    for_each_region(options, report, [&](const RegionConfig& region) {
        const RegionData data = load_region(region, options.temperature_bounds);
        for (const auto& w : data.warnings) report.warnings.push_back("region " + region.id + ": " + w);
        const fs::path dir = region_dir(options, region);
        fs::create_directories(dir);

        std::vector<const HourlySeries*> all;
        for (const auto& [var, s] : data.grid) all.push_back(&s);
        if (data.temperature) all.push_back(&*data.temperature);

        Table coverage{"coverage",
                       {"variable", "first_hour", "last_hour", "present", "missing", "longest_gap", "missing_days"},
                       {}};
        for (const HourlySeries* s : all) {
            const fs::path path = dir / (std::string(to_string(s->variable())) + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
            write_series_csv(out, *s);
            report.outputs.push_back(path);

            const HourStamp first = window ? window->first_hour() : s->start();
            const HourStamp last = window ? window->last_hour() : s->end();
            const CoverageReport cov = coverage_report(*s, first, last);
            std::string days;
            for (Date d : cov.missing_days) days += (days.empty() ? "" : ";") + format_date(d);
            coverage.rows.push_back({std::string(to_string(s->variable())), format_hour(first), format_hour(last),
                                     cell(cov.present), cell(cov.missing), cell(cov.longest_gap), days});
        }
        emit(report, dir, coverage, options.format());
    });
    return report;
}

// ---------------------------------------------------------------------------

CommandReport cmd_indicators(const CommandOptions& options) {
    CommandReport report;
    const AnalysisConfig& cfg = options.config;
    std::optional<std::pair<std::string, DateRange>> window;
    if (!options.windows.empty()) window.emplace(options.windows.front(), cfg.window(options.windows.front()));

    for_each_region(options, report, [&](const RegionConfig& region) {
        const RegionData data = load_region(region, options.temperature_bounds);
        for (const auto& w : data.warnings) report.warnings.push_back("region " + region.id + ": " + w);
        const fs::path dir = region_dir(options, region);
        auto warn = [&](const std::string& msg) { report.warnings.push_back("region " + region.id + ": " + msg); };

        auto windowed = [&](Variable v) -> std::optional<HourlySeries> {
            const HourlySeries* s = data.find(v);
            if (!s) return std::nullopt;
            if (!window) return *s;
            HourlySeries sliced = s->slice(window->second);
            if (sliced.present_count() == 0) return std::nullopt;
            return sliced;
        };
        if (window) {
            bool any = false;
            for (const auto& [v, s] : data.grid) any |= s.slice(window->second).present_count() > 0;
            if (!any) {
                throw Error(ErrorKind::InsufficientData, "window '" + window->first + "' contains no grid data");
            }
        }

        int produced = 0;
        const auto demand = windowed(Variable::Demand);
        if (demand) {
            const DailySeries totals = daily_aggregate(*demand, Reducer::Sum, cfg.indicators.daily_min_coverage);
            emit(report, dir, daily_table("daily_totals", "total_mwh", totals), options.format());

            const PeakTroughResult pt = daily_peak_trough(*demand, cfg.indicators.min_coverage);
            Table peak{"peak_trough", {"date", "peak_mwh", "trough_mwh"}, {}};
            for (const auto& d : pt.days) peak.rows.push_back({format_date(d.date), cell(d.peak), cell(d.trough)});
            emit(report, dir, peak, options.format());
            if (!pt.omitted.empty()) {
                std::string days;
                for (Date d : pt.omitted) days += (days.empty() ? "" : ", ") + format_date(d);
                warn("peak/trough omitted under-covered days: " + days);
            }

            if (demand->size() >= 2) {
                emit(report, dir, hourly_table("ramp_rate", "ramp_mwh", ramp_rate(*demand)), options.format());
            } else {
                warn("ramp rate skipped: fewer than 2 hours");
            }
            produced += 3;

            if (cfg.indicators.trend_anchor) {
                try {
                    const TrendFit fit = trend_fit(totals, *cfg.indicators.trend_anchor);
                    Table trend{"trend",
                                {"anchor", "slope_mwh_per_day", "intercept_mwh", "r_squared", "p_value_slope", "n"},
                                {{format_date(*cfg.indicators.trend_anchor), cell(fit.slope), cell(fit.intercept),
                                  cell(fit.r_squared), cell(fit.p_value_slope), cell(fit.n)}}};
                    emit(report, dir, trend, options.format());
                } catch (const Error& e) {
                    warn(std::string("trend fit skipped: ") + e.what());
                }
            }
        } else {
            warn("no demand data; peak/trough, ramp rate and daily totals skipped");
        }

        const auto forecast = windowed(Variable::Forecast);
        if (demand && forecast) {
            const HourlySeries err = forecast_error(*demand, *forecast);
            emit(report, dir, hourly_table("forecast_error", "error_mwh", err), options.format());
            emit(report, dir,
                 daily_table("forecast_error_daily", "mean_error_mwh", daily_aggregate(err, Reducer::Mean, 1)),
                 options.format());
            ++produced;
        } else {
            warn("forecast error skipped: needs demand and forecast data");
        }

        if (const auto interchange = windowed(Variable::Interchange)) {
            emit(report, dir, daily_table("interchange_daily", "mean_mwh", interchange_daily_mean(*interchange)),
                 options.format());
            ++produced;
        } else {
            warn("interchange skipped: no interchange data");
        }

        if (cfg.indicators.align) {
            const HourlySeries* full = data.find(Variable::Demand);
            if (!full) {
                warn("alignment skipped: no demand data");
            } else {
                const AlignOptions& al = *cfg.indicators.align;
                const HourlySeries a = full->slice(cfg.window(al.window_a));
                const HourlySeries b = full->slice(cfg.window(al.window_b));
                if (a.empty() || b.empty()) {
                    throw Error(ErrorKind::Range, "alignment windows '" + al.window_a + "'/'" + al.window_b +
                                                      "' are not covered by the demand series");
                }
                Table hourly{"aligned_hourly_demand", {"day_offset", "hour", "demand_a_mwh", "demand_b_mwh"}, {}};
                for (const auto& row : align_series(a, b, al.month)) {
                    hourly.rows.push_back({cell(row.day_offset), cell(row.hour), cell(row.a), cell(row.b)});
                }
                emit(report, dir, hourly, options.format());
                Table daily{"aligned_daily_totals", {"day_offset", "total_a_mwh", "total_b_mwh"}, {}};
                const int cov = cfg.indicators.daily_min_coverage;
                for (const auto& row : align_daily(daily_aggregate(a, Reducer::Sum, cov),
                                                   daily_aggregate(b, Reducer::Sum, cov), al.month)) {
                    daily.rows.push_back({cell(row.day_offset), cell(row.a), cell(row.b)});
                }
                emit(report, dir, daily, options.format());
            }
        }

        if (produced == 0) throw Error(ErrorKind::InsufficientData, "no indicator could be computed");
    });
    return report;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& density_indicators() {
    static const std::vector<std::string> names = {"demand",      "ramp_rate", "forecast_error", "peak",
                                                   "trough",      "daily_total", "interchange"};
    return names;
}

CommandReport cmd_density(const CommandOptions& options) {
    CommandReport report;
    const AnalysisConfig& cfg = options.config;
    const auto& names = density_indicators();
    if (std::find(names.begin(), names.end(), options.indicator) == names.end()) {
        report.exit_code = 2;
        report.failures.push_back("unknown indicator '" + options.indicator + "'");
        return report;
    }
    if (options.windows.size() != 2) {
        report.exit_code = 2;
        report.failures.push_back("density needs exactly two --window names");
        return report;
    }
    NamedWindow wa, wb;
    try {
        wa = {options.windows[0], cfg.window(options.windows[0])};
        wb = {options.windows[1], cfg.window(options.windows[1])};
    } catch (const Error& e) {
        report.exit_code = exit_code(e.kind());
        report.failures.push_back(e.what());
        return report;
    }

    for_each_region(options, report, [&](const RegionConfig& region) {
        const RegionData data = load_region(region, options.temperature_bounds);
        auto need = [&](Variable v) -> const HourlySeries& {
            const HourlySeries* s = data.find(v);
            if (!s) {
                throw Error(ErrorKind::InsufficientData,
                            std::string("indicator '") + options.indicator + "' needs " + to_string(v) + " data");
            }
            return *s;
        };

        PeriodComparison cmp;
        const std::string& ind = options.indicator;
        const auto bw = cfg.density.bandwidth;
        const auto pts = cfg.density.grid_points;
        if (ind == "demand") {
            cmp = compare_periods(need(Variable::Demand), wa, wb, bw, pts);
        } else if (ind == "ramp_rate") {
            cmp = compare_periods(ramp_rate(need(Variable::Demand)), wa, wb, bw, pts);
        } else if (ind == "forecast_error") {
            cmp = compare_periods(forecast_error(need(Variable::Demand), need(Variable::Forecast)), wa, wb, bw, pts);
        } else if (ind == "interchange") {
            cmp = compare_periods(need(Variable::Interchange), wa, wb, bw, pts);
        } else if (ind == "daily_total") {
            cmp = compare_periods(
                daily_aggregate(need(Variable::Demand), Reducer::Sum, cfg.indicators.daily_min_coverage), wa, wb,
                bw, pts);
        } else {
            const int cov = cfg.indicators.min_coverage;
            const Reducer r = ind == "peak" ? Reducer::Max : Reducer::Min;
            cmp = compare_periods(daily_aggregate(need(Variable::Demand), r, cov), wa, wb, bw, pts);
        }

        const fs::path dir = region_dir(options, region);
        const std::string stem = "density_" + ind + "_" + wa.name + "_vs_" + wb.name;
        Table curves{stem, {"x", "density_a", "density_b"}, {}};
        for (std::size_t i = 0; i < cmp.a.grid.size(); ++i) {
            curves.rows.push_back({cell(cmp.a.grid[i]), cell(cmp.a.density[i]), cell(cmp.b.density[i])});
        }
        emit(report, dir, curves, options.format());

        Table summary{stem + "_summary", {"statistic", "window_a", "window_b", "delta_b_minus_a"}, {}};
        summary.rows.push_back({std::string("window"), wa.name, wb.name, Cell()});
        summary.rows.push_back({std::string("n"), cell(cmp.summary_a.n), cell(cmp.summary_b.n),
                                cell(static_cast<long long>(cmp.summary_b.n) - static_cast<long long>(cmp.summary_a.n))});
        summary.rows.push_back({std::string("mean"), cell(cmp.summary_a.mean), cell(cmp.summary_b.mean), cell(cmp.delta_mean)});
        summary.rows.push_back({std::string("std"), cell(cmp.summary_a.std), cell(cmp.summary_b.std), cell(cmp.delta_std)});
        summary.rows.push_back({std::string("p01"), cell(cmp.summary_a.p01), cell(cmp.summary_b.p01), cell(cmp.delta_p01)});
        summary.rows.push_back({std::string("p99"), cell(cmp.summary_a.p99), cell(cmp.summary_b.p99), cell(cmp.delta_p99)});
        summary.rows.push_back({std::string("bandwidth"), cell(cmp.a.bandwidth), cell(cmp.b.bandwidth),
                                cell(cmp.b.bandwidth - cmp.a.bandwidth)});
        emit(report, dir, summary, options.format());
    });
    return report;
}

// ---------------------------------------------------------------------------

CommandReport cmd_backcast(const CommandOptions& options) {
    CommandReport report;
    const AnalysisConfig& cfg = options.config;
    const BackcastOptions& bc = cfg.backcast;
    std::string train_name = bc.train, event_name = bc.event, base_name = bc.base;
    std::optional<std::string> holdout_name = bc.holdout;
    if (!options.windows.empty()) {
        if (options.windows.size() < 3 || options.windows.size() > 4) {
            report.exit_code = 2;
            report.failures.push_back("backcast takes --window train event base [holdout]");
            return report;
        }
        train_name = options.windows[0];
        event_name = options.windows[1];
        base_name = options.windows[2];
        if (options.windows.size() == 4) holdout_name = options.windows[3];
    }

    for_each_region(options, report, [&](const RegionConfig& region) {
        auto warn = [&](const std::string& msg) { report.warnings.push_back("region " + region.id + ": " + msg); };
        if (!region.weather_csv) {
            throw Error(ErrorKind::Config, "backcast needs a weather_csv for region " + region.id);
        }
        const DateRange train = cfg.window(train_name);
        const DateRange event = cfg.window(event_name);
        const DateRange base = cfg.window(base_name);
        if (sys_days{train.last} >= sys_days{event.first} && sys_days{event.last} >= sys_days{train.first}) {
            warn("training window '" + train_name + "' overlaps event window '" + event_name +
                 "'; changes over the overlap are in-sample");
        }

        const RegionData data = load_region(region, options.temperature_bounds);
        const HourlySeries* demand = data.find(Variable::Demand);
        if (!demand) throw Error(ErrorKind::InsufficientData, "region has no demand data");
        const HourlySeries& temps = *data.temperature;

        const HourlySeries train_temps = require_window(temps, train, train_name);
        const HourlySeries train_demand = require_window(*demand, train, train_name);
        const fs::path dir = region_dir(options, region);

        DegreeParams params{};
        if (cfg.model.setpoints) {
            params = *cfg.model.setpoints;
        } else {
            const auto hg = make_grid(cfg.model.heating_grid.from, cfg.model.heating_grid.to, cfg.model.heating_grid.step);
            const auto cg = make_grid(cfg.model.cooling_grid.from, cfg.model.cooling_grid.to, cfg.model.cooling_grid.step);
            const SetpointSearchResult search =
                search_setpoints(train_temps, train_demand, hg, cg, cfg.model.criterion, cfg.model.workers);
            params = search.best;
            Table scores{"setpoint_scores", {"heating_degF", "cooling_degF", "score", "std_rel_error", "ssr", "r_squared", "status"}, {}};
            for (const auto& s : search.table) {
                if (s.score) {
                    scores.rows.push_back({cell(s.params.heating_setpoint), cell(s.params.cooling_setpoint), cell(*s.score),
                                           cell(s.std_rel_error), cell(s.ssr), cell(s.r_squared), std::string("ok")});
                } else {
                    scores.rows.push_back({cell(s.params.heating_setpoint), cell(s.params.cooling_setpoint), Cell(), Cell(),
                                           Cell(), Cell(), s.failure});
                }
            }
            emit(report, dir, scores, options.format());
        }

        const Design design = build_design(train_temps, train_demand, params);
        for (const auto& w : design.warnings) warn(w);
        const FitResult fit = fit_ols(design);
        for (const auto& w : fit.model.warnings) warn(w);
        {
            fs::create_directories(dir);
            const fs::path path = dir / "model.json";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
            out << model_to_json(fit.model, summarize(fit.diagnostics));
            report.outputs.push_back(path);
        }

        const int cov = bc.daily_min_coverage;
        auto daily_pair = [&](const DateRange& range, const std::string& name) {
            const HourlySeries obs = require_window(*demand, range, name);
            const HourlySeries pred = predict_counterfactual(fit.model, require_window(temps, range, name));
            return std::pair{daily_aggregate(mask_joint(obs, pred), Reducer::Sum, cov),
                             daily_aggregate(mask_joint(pred, obs), Reducer::Sum, cov)};
        };

        const std::string sigma_name = holdout_name.value_or(train_name);
        if (!holdout_name) warn("no holdout window; sigma is taken from in-sample daily residuals");
        const auto [sigma_obs, sigma_pred] = daily_pair(cfg.window(sigma_name), sigma_name);
        const double sigma = daily_residual_sigma(sigma_obs, sigma_pred);
        const double base_mwh =
            base_mean(daily_aggregate(require_window(*demand, base, base_name), Reducer::Sum, cov), base);

        const HourlySeries event_obs = require_window(*demand, event, event_name);
        const HourlySeries event_pred = predict_counterfactual(fit.model, require_window(temps, event, event_name));
        Table hourly{"counterfactual_hourly", {"timestamp", "observed_mwh", "counterfactual_mwh"}, {}};
        for (std::size_t i = 0; i < event_obs.size(); ++i) {
            hourly.rows.push_back({format_hour(event_obs.stamp(i)), cell(event_obs[i]), cell(event_pred.at(event_obs.stamp(i)))});
        }
        emit(report, dir, hourly, options.format());

        const auto [event_daily_obs, event_daily_pred] = daily_pair(event, event_name);
        const auto changes = change_series_with_base(event_daily_obs, event_daily_pred, base_mwh, sigma);
        if (changes.empty()) {
            throw Error(ErrorKind::InsufficientData, "event window '" + event_name + "' has no fully covered day");
        }
        Table change{"change",
                     {"date", "observed_mwh", "counterfactual_mwh", "change_pct", "ci95_lo", "ci95_hi", "ci99_lo", "ci99_hi"},
                     {}};
        for (const auto& c : changes) {
            change.rows.push_back({format_date(c.date), cell(c.observed), cell(c.counterfactual), cell(c.change_pct),
                                   cell(c.ci95_lo), cell(c.ci95_hi), cell(c.ci99_lo), cell(c.ci99_hi)});
        }
        emit(report, dir, change, options.format());

        Table diag{"fit_diagnostics", {"metric", "value"}, {}};
        diag.rows.push_back({std::string("heating_setpoint_degF"), cell(params.heating_setpoint)});
        diag.rows.push_back({std::string("cooling_setpoint_degF"), cell(params.cooling_setpoint)});
        diag.rows.push_back({std::string("alpha_h_mwh_per_degF2"), cell(fit.model.alpha_h)});
        diag.rows.push_back({std::string("alpha_c_mwh_per_degF2"), cell(fit.model.alpha_c)});
        diag.rows.push_back({std::string("n_train"), cell(fit.model.n_train)});
        diag.rows.push_back({std::string("mean_rel_error"), cell(fit.diagnostics.mean_rel_error)});
        diag.rows.push_back({std::string("std_rel_error"), cell(fit.diagnostics.std_rel_error)});
        diag.rows.push_back({std::string("r_squared"), cell(fit.diagnostics.r_squared)});
        diag.rows.push_back({std::string("condition_estimate"), cell(fit.model.condition_estimate)});
        diag.rows.push_back({std::string("sigma_window"), sigma_name});
        diag.rows.push_back({std::string("sigma_daily_mwh"), cell(sigma)});
        diag.rows.push_back({std::string("base_mean_mwh"), cell(base_mwh)});
        diag.rows.push_back({std::string("sigma_pct"), cell(100.0 * sigma / base_mwh)});
        emit(report, dir, diag, options.format());
    });
    return report;
}

}  // namespace gridstress
