#include "gridstress/series.hpp"

#include <algorithm>
#include <limits>

#include "gridstress/errors.hpp"

namespace gridstress {

using namespace std::chrono;

const char* to_string(Variable v) {
    switch (v) {
        case Variable::Demand: return "demand";
        case Variable::Forecast: return "forecast";
        case Variable::Interchange: return "interchange";
        case Variable::Temperature: return "temperature";
    }
    return "?";
}

const char* to_string(Unit u) { return u == Unit::MWh ? "MWh" : "degF"; }

std::optional<Variable> parse_variable(std::string_view name) {
    for (auto v : {Variable::Demand, Variable::Forecast, Variable::Interchange,
                   Variable::Temperature}) {
        if (name == to_string(v)) return v;
    }
    return std::nullopt;
}

Unit unit_for(Variable v) { return v == Variable::Temperature ? Unit::DegF : Unit::MWh; }

// ---------------------------------------------------------------------------

HourlySeries::HourlySeries(std::string region_id, Variable variable, HourStamp start,
                           std::vector<Sample> values)
    : region_id_(std::move(region_id)),
      variable_(variable),
      start_(start),
      values_(std::move(values)) {}

HourStamp HourlySeries::end() const {
    return start_ + hours{static_cast<long long>(values_.size()) - 1};
}

HourStamp HourlySeries::stamp(std::size_t i) const {
    return start_ + hours{static_cast<long long>(i)};
}

bool HourlySeries::covers(HourStamp t) const {
    return !values_.empty() && t >= start_ && t <= end();
}

Sample HourlySeries::at(HourStamp t) const {
    if (!covers(t)) return std::nullopt;
    return values_[static_cast<std::size_t>((t - start_).count())];
}

std::size_t HourlySeries::present_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](const Sample& s) { return s.has_value(); }));
}

HourlySeries HourlySeries::slice(HourStamp first, HourStamp last) const {
    if (values_.empty() || last < first || last < start_ || first > end()) {
        return HourlySeries(region_id_, variable_, first, {});
    }
    HourStamp lo = std::max(first, start_);
    HourStamp hi = std::min(last, end());
    auto b = static_cast<std::ptrdiff_t>((lo - start_).count());
    auto e = static_cast<std::ptrdiff_t>((hi - start_).count()) + 1;
    return HourlySeries(region_id_, variable_, lo,
                        std::vector<Sample>(values_.begin() + b, values_.begin() + e));
}

HourlySeries HourlySeries::slice(const DateRange& range) const {
    return slice(range.first_hour(), range.last_hour());
}

std::vector<double> HourlySeries::present_values() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& s : values_)
        if (s) out.push_back(*s);
    return out;
}

// ---------------------------------------------------------------------------

DailySeries::DailySeries(std::string region_id, Variable variable, std::vector<Date> dates,
                         std::vector<Sample> values, std::vector<int> coverage)
    : region_id_(std::move(region_id)),
      variable_(variable),
      dates_(std::move(dates)),
      values_(std::move(values)),
      coverage_(std::move(coverage)) {
    if (values_.size() != dates_.size() || coverage_.size() != dates_.size()) {
        throw Error(ErrorKind::Validation, "daily series columns differ in length");
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (sys_days{dates_[i]} <= sys_days{dates_[i - 1]}) {
            throw Error(ErrorKind::Order, "daily series dates must be strictly increasing");
        }
    }
    for (int c : coverage_) {
        if (c < 0 || c > 24) throw Error(ErrorKind::Validation, "daily coverage outside 0..24");
    }
}

Sample DailySeries::at(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d,
                               [](Date x, Date y) { return sys_days{x} < sys_days{y}; });
    if (it == dates_.end() || *it != d) return std::nullopt;
    return values_[static_cast<std::size_t>(it - dates_.begin())];
}

DailySeries DailySeries::slice(const DateRange& range) const {
    std::vector<Date> dates;
    std::vector<Sample> values;
    std::vector<int> coverage;
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (range.contains(dates_[i])) {
            dates.push_back(dates_[i]);
            values.push_back(values_[i]);
            coverage.push_back(coverage_[i]);
        }
    }
    return DailySeries(region_id_, variable_, std::move(dates), std::move(values),
                       std::move(coverage));
}

std::vector<double> DailySeries::present_values() const {
    std::vector<double> out;
    for (const auto& s : values_)
        if (s) out.push_back(*s);
    return out;
}

// ---------------------------------------------------------------------------

DailySeries daily_aggregate(const HourlySeries& series, Reducer reducer, int min_coverage) {
    if (min_coverage < 0 || min_coverage > 24) {
        throw Error(ErrorKind::Config, "min_coverage must lie in 0..24");
    }
    std::vector<Date> dates;
    std::vector<Sample> values;
    std::vector<int> coverage;
    if (series.empty()) {
        return DailySeries(series.region_id(), series.variable(), {}, {}, {});
    }
    const Date first = day_of(series.start());
    const Date last = day_of(series.end());
    for (Date d = first; sys_days{d} <= sys_days{last}; d = add_days(d, 1)) {
        int present = 0;
        double acc = 0.0;
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (int h = 1; h <= 24; ++h) {
            Sample s = series.at(hour_stamp(d, h));
            if (!s) continue;
            ++present;
            acc += *s;
            hi = std::max(hi, *s);
            lo = std::min(lo, *s);
        }
        Sample value;
        if (present > 0 && present >= min_coverage) {
            switch (reducer) {
                case Reducer::Sum: value = acc; break;
                case Reducer::Mean: value = acc / present; break;
                case Reducer::Max: value = hi; break;
                case Reducer::Min: value = lo; break;
            }
        }
        dates.push_back(d);
        values.push_back(value);
        coverage.push_back(present);
    }
    return DailySeries(series.region_id(), series.variable(), std::move(dates),
                       std::move(values), std::move(coverage));
}

namespace {

int year_touching_month(const std::vector<Date>& days, unsigned month, const char* which) {
    for (Date d : days) {
        if (static_cast<unsigned>(d.month()) == month) return static_cast<int>(d.year());
    }
    throw Error(ErrorKind::Range, std::string("series ") + which + " does not cover month " +
                                      std::to_string(month));
}

std::vector<Date> day_span(const HourlySeries& s) {
    std::vector<Date> out;
    if (s.empty()) return out;
    for (Date d = day_of(s.start()); sys_days{d} <= sys_days{day_of(s.end())}; d = add_days(d, 1))
        out.push_back(d);
    return out;
}

int default_span(Date anchor_a, Date last_a, Date anchor_b, Date last_b) {
    int span = std::max(days_between(anchor_a, last_a), days_between(anchor_b, last_b)) + 1;
    return std::max(span, 0);
}

}  // namespace

std::vector<AlignedRow> align_series(const HourlySeries& a, const HourlySeries& b,
                                     unsigned month, std::optional<int> span_days) {
    auto days_a = day_span(a);
    auto days_b = day_span(b);
    const Date anchor_a = first_monday(year_touching_month(days_a, month, "a"), month);
    const Date anchor_b = first_monday(year_touching_month(days_b, month, "b"), month);
    const int span = span_days.value_or(
        default_span(anchor_a, days_a.back(), anchor_b, days_b.back()));

    std::vector<AlignedRow> rows;
    rows.reserve(static_cast<std::size_t>(span) * 24);
    for (int offset = 0; offset < span; ++offset) {
        for (int h = 1; h <= 24; ++h) {
            rows.push_back({offset, h, a.at(hour_stamp(add_days(anchor_a, offset), h)),
                            b.at(hour_stamp(add_days(anchor_b, offset), h))});
        }
    }
    return rows;
}

std::vector<AlignedDailyRow> align_daily(const DailySeries& a, const DailySeries& b,
                                         unsigned month, std::optional<int> span_days) {
    std::vector<Date> days_a(a.dates().begin(), a.dates().end());
    std::vector<Date> days_b(b.dates().begin(), b.dates().end());
    const Date anchor_a = first_monday(year_touching_month(days_a, month, "a"), month);
    const Date anchor_b = first_monday(year_touching_month(days_b, month, "b"), month);
    const int span = span_days.value_or(
        default_span(anchor_a, days_a.back(), anchor_b, days_b.back()));

    std::vector<AlignedDailyRow> rows;
    rows.reserve(static_cast<std::size_t>(span));
    for (int offset = 0; offset < span; ++offset) {
        rows.push_back({offset, a.at(add_days(anchor_a, offset)), b.at(add_days(anchor_b, offset))});
    }
    return rows;
}

}  // namespace gridstress
