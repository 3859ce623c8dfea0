#pragma once

// Synthetic data with planted parameters, shared by unit and acceptance tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gridstress/calendar.hpp"
#include "gridstress/series.hpp"
#include "gridstress/weather_correct.hpp"

namespace gridstress::testing {

struct Planted {
    double alpha_h = 5.0;
    double alpha_c = 8.0;
    std::array<double, kHoursPerWeek> baseload{};
    DegreeParams params{55.0, 75.0};
};

// Smooth weekly curve between 1500 and 2500 MWh.
inline std::array<double, kHoursPerWeek> weekly_baseload() {
    std::array<double, kHoursPerWeek> b{};
    const double pi = std::acos(-1.0);
    for (int w = 1; w <= kHoursPerWeek; ++w) {
        const double daily = std::sin(2.0 * pi * (w - 6) / 24.0);
        const double weekly = std::cos(2.0 * pi * w / kHoursPerWeek);
        b[w - 1] = 2000.0 + 380.0 * daily + 110.0 * weekly;
    }
    return b;
}

inline Planted default_planted() {
    Planted p;
    p.baseload = weekly_baseload();
    return p;
}

// Temperatures sweeping roughly 40..95 degF with a daily cycle, a slow drift
// and deterministic jitter, so both degree terms are exercised.
inline HourlySeries synthetic_temperatures(const std::string& region, HourStamp start, std::size_t hours,
                                           std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-3.0, 3.0);
    const double pi = std::acos(-1.0);
    std::vector<Sample> t(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        const double day = std::sin(2.0 * pi * (static_cast<double>(i % 24) - 9.0) / 24.0);
        const double drift = std::sin(2.0 * pi * static_cast<double>(i) / (24.0 * 9.5));
        t[i] = 67.0 + 15.0 * day + 12.0 * drift + jitter(rng);
    }
    return HourlySeries(region, Variable::Temperature, start, std::move(t));
}

inline double planted_value(const Planted& p, double temp, int how) {
    const DegreePair d = degrees(temp, p.params);
    return p.alpha_h * d.heating * d.heating + p.alpha_c * d.cooling * d.cooling + p.baseload[how - 1];
}

// Demand generated from the planted model plus N(0, sigma) noise.
inline HourlySeries synthetic_demand(const Planted& p, const HourlySeries& temps, double sigma,
                                     std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<Sample> d(temps.size());
    for (std::size_t i = 0; i < temps.size(); ++i) {
        if (!temps[i]) continue;
        const double e = sigma > 0.0 ? noise(rng) : 0.0;
        d[i] = planted_value(p, *temps[i], hour_of_week(temps.stamp(i))) + e;
    }
    return HourlySeries(temps.region_id(), Variable::Demand, temps.start(), std::move(d));
}

inline Eigen::VectorXd planted_theta(const Planted& p) {
    Eigen::VectorXd theta(kParameterCount);
    theta(0) = p.alpha_h;
    theta(1) = p.alpha_c;
    for (int w = 0; w < kHoursPerWeek; ++w) theta(2 + w) = p.baseload[w];
    return theta;
}

// Monday 2019-03-04 01:00, the first hour-of-week slot.
inline HourStamp training_start() {
    using namespace std::chrono;
    return hour_stamp(year{2019} / March / 4, 1);
}

}  // namespace gridstress::testing
