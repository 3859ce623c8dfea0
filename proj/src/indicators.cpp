#include "gridstress/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridstress/errors.hpp"

namespace gridstress {

using namespace std::chrono;

namespace {

void require_variable(const HourlySeries& s, Variable expected, const char* op) {
    if (s.variable() != expected) {
        throw Error(ErrorKind::Type, std::string(op) + " expects a " + to_string(expected) +
                                         " series, got " + to_string(s.variable()));
    }
}

}  // namespace

PeakTroughResult daily_peak_trough(const HourlySeries& demand, int min_coverage) {
    require_variable(demand, Variable::Demand, "daily_peak_trough");
    if (min_coverage < 1 || min_coverage > 24) {
        throw Error(ErrorKind::Config, "min_coverage must lie in 1..24");
    }
    const DailySeries peaks = daily_aggregate(demand, Reducer::Max, min_coverage);
    const DailySeries troughs = daily_aggregate(demand, Reducer::Min, min_coverage);

    PeakTroughResult result;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        if (peaks.values()[i] && troughs.values()[i]) {
            result.days.push_back({peaks.dates()[i], *peaks.values()[i], *troughs.values()[i]});
        } else {
            result.omitted.push_back(peaks.dates()[i]);
        }
    }
    return result;
}

HourlySeries ramp_rate(const HourlySeries& demand) {
    require_variable(demand, Variable::Demand, "ramp_rate");
    if (demand.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "ramp_rate needs at least 2 hours");
    }
    std::vector<Sample> out(demand.size());
    for (std::size_t k = 1; k < demand.size(); ++k) {
        if (demand[k] && demand[k - 1]) out[k] = *demand[k] - *demand[k - 1];
    }
    return HourlySeries(demand.region_id(), Variable::Demand, demand.start(), std::move(out));
}

HourlySeries forecast_error(const HourlySeries& demand, const HourlySeries& forecast) {
    require_variable(demand, Variable::Demand, "forecast_error");
    require_variable(forecast, Variable::Forecast, "forecast_error");
    if (demand.region_id() != forecast.region_id()) {
        throw Error(ErrorKind::Validation, "forecast_error: demand region '" + demand.region_id() +
                                               "' differs from forecast region '" +
                                               forecast.region_id() + "'");
    }
    if (demand.empty() || forecast.empty() || demand.end() < forecast.start() ||
        forecast.end() < demand.start()) {
        throw Error(ErrorKind::NoOverlap, "forecast_error: demand and forecast do not overlap");
    }
    const HourStamp first = std::max(demand.start(), forecast.start());
    const HourStamp last = std::min(demand.end(), forecast.end());
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>((last - first).count()) + 1);
    for (HourStamp t = first; t <= last; t += hours{1}) {
        Sample d = demand.at(t), f = forecast.at(t);
        out.push_back(d && f ? Sample(*d - *f) : std::nullopt);
    }
    return HourlySeries(demand.region_id(), Variable::Demand, first, std::move(out));
}

DailySeries interchange_daily_mean(const HourlySeries& interchange) {
    require_variable(interchange, Variable::Interchange, "interchange_daily_mean");
    return daily_aggregate(interchange, Reducer::Mean, 1);
}

TrendFit trend_fit(const DailySeries& daily, Date anchor) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < daily.size(); ++i) {
        if (!daily.values()[i]) continue;
        xs.push_back(static_cast<double>(days_between(anchor, daily.dates()[i])));
        ys.push_back(*daily.values()[i]);
    }
    const std::size_t n = xs.size();
    if (n < 3) {
        throw Error(ErrorKind::InsufficientData,
                    "trend_fit needs at least 3 present days, got " + std::to_string(n));
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - xbar, dy = ys[i] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw Error(ErrorKind::Degenerate, "trend_fit: zero variance in x");

    TrendFit fit{};
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 0.0;

    const double dof = static_cast<double>(n) - 2.0;
    const double se = std::sqrt(ssr / dof / sxx);
    if (se == 0.0) {
        fit.p_value_slope = fit.slope == 0.0 ? 1.0 : 0.0;
    } else {
        fit.p_value_slope = student_t_two_sided_p(fit.slope / se, dof);
    }
    return fit;
}

namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error(ErrorKind::Numerical, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(ErrorKind::Numerical, "incomplete_beta requires a, b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::Numerical, "incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw Error(ErrorKind::Numerical, "student t needs dof > 0");
    if (std::isinf(t)) return 0.0;
    if (std::isnan(t)) throw Error(ErrorKind::Numerical, "student t statistic is NaN");
    return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

}  // namespace gridstress
