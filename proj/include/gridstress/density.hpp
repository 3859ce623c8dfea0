#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridstress/calendar.hpp"
#include "gridstress/series.hpp"

namespace gridstress {

struct DensityEstimate {
    std::vector<double> grid;     // evaluation points, sample units
    std::vector<double> density;  // 1/unit
    double bandwidth = 0.0;
    std::size_t n_samples = 0;
    double sample_mean = 0.0;
    double sample_std = 0.0;
};

struct GridSpec {
    double lo;
    double hi;
    std::size_t count;
};

constexpr std::size_t kDefaultGridPoints = 512;

/// 0.9 * min(std, IQR / 1.34) * n^(-1/5). Falls back to std when the IQR is
/// zero; throws Degenerate when the samples have no spread at all.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian-kernel density at a single point.
double kde_at(std::span<const double> samples, double bandwidth, double x);

/// Gaussian KDE over a grid. Without a bandwidth Silverman's rule is used;
/// without a grid spec the grid spans [min - 3h, max + 3h] in 512 points.
DensityEstimate kde(std::span<const double> samples, std::optional<double> bandwidth = {},
                    std::optional<GridSpec> grid = {});

/// Empirical quantile with linear interpolation between order statistics.
double percentile(std::span<const double> samples, double q);

struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
    double p01 = 0.0;
    double p99 = 0.0;
};

SampleSummary summarize(std::span<const double> samples);

struct NamedWindow {
    std::string name;
    DateRange range;
};

struct PeriodComparison {
    std::string name_a;
    std::string name_b;
    DensityEstimate a;
    DensityEstimate b;  // same grid as `a`
    SampleSummary summary_a;
    SampleSummary summary_b;
    // b minus a
    double delta_mean = 0.0;
    double delta_std = 0.0;
    double delta_p01 = 0.0;
    double delta_p99 = 0.0;
};

/// KDEs of two sample sets on a shared grid spanning both default grids,
/// with summary deltas (b - a). Throws InsufficientData naming the window
/// that has fewer than 2 samples.
PeriodComparison compare_samples(std::span<const double> a, const std::string& name_a,
                                 std::span<const double> b, const std::string& name_b,
                                 std::optional<double> bandwidth = {},
                                 std::size_t grid_points = kDefaultGridPoints);

PeriodComparison compare_periods(const HourlySeries& series, const NamedWindow& a,
                                 const NamedWindow& b, std::optional<double> bandwidth = {},
                                 std::size_t grid_points = kDefaultGridPoints);
PeriodComparison compare_periods(const DailySeries& series, const NamedWindow& a,
                                 const NamedWindow& b, std::optional<double> bandwidth = {},
                                 std::size_t grid_points = kDefaultGridPoints);

}  // namespace gridstress
