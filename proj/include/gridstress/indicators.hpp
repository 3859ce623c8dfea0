#pragma once

#include <vector>

#include "gridstress/calendar.hpp"
#include "gridstress/series.hpp"

namespace gridstress {

struct PeakTrough {
    Date date;
    double peak;    // MWh
    double trough;  // MWh
};

struct PeakTroughResult {
    std::vector<PeakTrough> days;
    std::vector<Date> omitted;  // days below min_coverage
};

/// Per-day maximum and minimum of hourly demand over present hours. Days
/// with fewer than `min_coverage` present hours are omitted and listed.
PeakTroughResult daily_peak_trough(const HourlySeries& demand, int min_coverage = 20);

/// d_k - d_{k-1}; the first hour and any hour touching a MISSING operand are
/// MISSING.
HourlySeries ramp_rate(const HourlySeries& demand);

/// Actual minus day-ahead forecast over the overlap of both series. Positive
/// values mean the forecast was too low.
HourlySeries forecast_error(const HourlySeries& demand, const HourlySeries& forecast);

/// Per-day mean of hourly net interchange (positive = net export).
DailySeries interchange_daily_mean(const HourlySeries& interchange);

struct TrendFit {
    double slope;      // MWh/day
    double intercept;  // MWh at the anchor date
    double r_squared;
    double p_value_slope;  // two-sided t-test, n - 2 degrees of freedom
    std::size_t n;
};

/// Simple linear regression of daily values on days elapsed since `anchor`.
TrendFit trend_fit(const DailySeries& daily, Date anchor);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof`
/// degrees of freedom.
double student_t_two_sided_p(double t, double dof);

}  // namespace gridstress
