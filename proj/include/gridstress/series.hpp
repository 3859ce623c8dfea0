#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridstress/calendar.hpp"

namespace gridstress {

enum class Variable { Demand, Forecast, Interchange, Temperature };
enum class Unit { MWh, DegF };

const char* to_string(Variable v);
const char* to_string(Unit u);
std::optional<Variable> parse_variable(std::string_view name);
Unit unit_for(Variable v);

/// A value or the MISSING marker (nullopt).
using Sample = std::optional<double>;

/// One region's hourly values of a single variable. Sample i is the hour
/// ending at start + i hours.
class HourlySeries {
public:
    HourlySeries() = default;
    HourlySeries(std::string region_id, Variable variable, HourStamp start,
                 std::vector<Sample> values);

    const std::string& region_id() const { return region_id_; }
    Variable variable() const { return variable_; }
    Unit unit() const { return unit_for(variable_); }
    HourStamp start() const { return start_; }
    /// Last hour covered; only meaningful for a non-empty series.
    HourStamp end() const;

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::span<const Sample> values() const { return values_; }
    const Sample& operator[](std::size_t i) const { return values_[i]; }
    HourStamp stamp(std::size_t i) const;

    bool covers(HourStamp t) const;
    /// Value at `t`; MISSING outside the covered range.
    Sample at(HourStamp t) const;
    std::size_t present_count() const;

    /// Sub-series clipped to [first, last]; empty when disjoint.
    HourlySeries slice(HourStamp first, HourStamp last) const;
    HourlySeries slice(const DateRange& range) const;

    /// Non-missing values, in order.
    std::vector<double> present_values() const;

    friend bool operator==(const HourlySeries&, const HourlySeries&) = default;

private:
    std::string region_id_;
    Variable variable_ = Variable::Demand;
    HourStamp start_{};
    std::vector<Sample> values_;
};

/// Per-day values derived from an hourly series.
class DailySeries {
public:
    DailySeries() = default;
    DailySeries(std::string region_id, Variable variable, std::vector<Date> dates,
                std::vector<Sample> values, std::vector<int> coverage);

    const std::string& region_id() const { return region_id_; }
    Variable variable() const { return variable_; }
    std::span<const Date> dates() const { return dates_; }
    std::span<const Sample> values() const { return values_; }
    std::span<const int> coverage() const { return coverage_; }
    std::size_t size() const { return dates_.size(); }
    bool empty() const { return dates_.empty(); }

    Sample at(Date d) const;
    DailySeries slice(const DateRange& range) const;
    std::vector<double> present_values() const;

    friend bool operator==(const DailySeries&, const DailySeries&) = default;

private:
    std::string region_id_;
    Variable variable_ = Variable::Demand;
    std::vector<Date> dates_;
    std::vector<Sample> values_;
    std::vector<int> coverage_;
};

enum class Reducer { Sum, Mean, Max, Min };

/// Reduces each hour-ending calendar day over its present hours. Days with
/// fewer than `min_coverage` present hours become MISSING; coverage is
/// recorded either way.
DailySeries daily_aggregate(const HourlySeries& series, Reducer reducer, int min_coverage);

struct AlignedRow {
    int day_offset;
    int hour;  // hour ending, 1..24
    Sample a;
    Sample b;
};

struct AlignedDailyRow {
    int day_offset;
    Sample a;
    Sample b;
};

/// Pairs two series so that day_offset 0 is the first Monday of `month` in
/// each series' own year (the first year in which the series touches that
/// month). Rows run until the later of the two series ends, or for
/// `span_days` days when given.
std::vector<AlignedRow> align_series(const HourlySeries& a, const HourlySeries& b,
                                     unsigned month, std::optional<int> span_days = {});
std::vector<AlignedDailyRow> align_daily(const DailySeries& a, const DailySeries& b,
                                         unsigned month, std::optional<int> span_days = {});

}  // namespace gridstress
