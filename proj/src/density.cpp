#include "gridstress/density.hpp"

#include <algorithm>
#include <cmath>

#include "gridstress/errors.hpp"

namespace gridstress {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

void require_samples(std::span<const double> samples, const std::string& what) {
    if (samples.size() < 2) {
        throw Error(ErrorKind::InsufficientData, what + " has " + std::to_string(samples.size()) +
                                                     " sample(s); at least 2 are required");
    }
    for (double s : samples) {
        if (!std::isfinite(s)) throw Error(ErrorKind::Validation, what + " contains a non-finite sample");
    }
}

double mean_of(std::span<const double> s) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc / static_cast<double>(s.size());
}

double std_of(std::span<const double> s, double mean) {
    double acc = 0.0;
    for (double v : s) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(s.size() - 1));
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double percentile(std::span<const double> samples, double q) {
    if (samples.empty()) throw Error(ErrorKind::InsufficientData, "percentile of no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile(sorted, q);
}

double silverman_bandwidth(std::span<const double> samples) {
    require_samples(samples, "sample set");
    const double sd = std_of(samples, mean_of(samples));
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) {
        throw Error(ErrorKind::Degenerate,
                    "samples have zero variance; pass an explicit bandwidth");
    }
    return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

double kde_at(std::span<const double> samples, double bandwidth, double x) {
    double acc = 0.0;
    for (double s : samples) {
        const double u = (x - s) / bandwidth;
        acc += std::exp(-0.5 * u * u);
    }
    return acc * kInvSqrt2Pi / (static_cast<double>(samples.size()) * bandwidth);
}

DensityEstimate kde(std::span<const double> samples, std::optional<double> bandwidth,
                    std::optional<GridSpec> grid) {
    // A forced bandwidth makes a single sample meaningful (point-mass kernel).
    if (bandwidth) {
        if (samples.empty()) {
            throw Error(ErrorKind::InsufficientData, "kde needs at least one sample");
        }
        if (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth)) {
            throw Error(ErrorKind::Config, "kde bandwidth must be positive");
        }
        for (double s : samples) {
            if (!std::isfinite(s)) throw Error(ErrorKind::Validation, "kde sample is not finite");
        }
    } else {
        require_samples(samples, "sample set");
    }

    DensityEstimate est;
    est.n_samples = samples.size();
    est.sample_mean = mean_of(samples);
    est.sample_std = samples.size() > 1 ? std_of(samples, est.sample_mean) : 0.0;
    est.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(samples);

    GridSpec spec;
    if (grid) {
        spec = *grid;
        if (spec.count < 1 || !(spec.hi >= spec.lo)) {
            throw Error(ErrorKind::Config, "kde grid needs count >= 1 and hi >= lo");
        }
    } else {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        spec = {*lo - 3.0 * est.bandwidth, *hi + 3.0 * est.bandwidth, kDefaultGridPoints};
    }

    est.grid.resize(spec.count);
    est.density.resize(spec.count);
    const double step = spec.count > 1 ? (spec.hi - spec.lo) / static_cast<double>(spec.count - 1) : 0.0;
    for (std::size_t i = 0; i < spec.count; ++i) {
        est.grid[i] = i + 1 == spec.count && spec.count > 1 ? spec.hi : spec.lo + step * static_cast<double>(i);
        est.density[i] = kde_at(samples, est.bandwidth, est.grid[i]);
    }
    return est;
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary s;
    s.n = samples.size();
    if (samples.empty()) return s;
    s.mean = mean_of(samples);
    s.std = samples.size() > 1 ? std_of(samples, s.mean) : 0.0;
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    s.p01 = sorted_quantile(sorted, 0.01);
    s.p99 = sorted_quantile(sorted, 0.99);
    return s;
}

PeriodComparison compare_samples(std::span<const double> a, const std::string& name_a,
                                 std::span<const double> b, const std::string& name_b,
                                 std::optional<double> bandwidth, std::size_t grid_points) {
    require_samples(a, "window '" + name_a + "'");
    require_samples(b, "window '" + name_b + "'");
    if (grid_points < 2) throw Error(ErrorKind::Config, "density grid needs at least 2 points");

    const double h_a = bandwidth ? *bandwidth : silverman_bandwidth(a);
    const double h_b = bandwidth ? *bandwidth : silverman_bandwidth(b);
    const auto [lo_a, hi_a] = std::minmax_element(a.begin(), a.end());
    const auto [lo_b, hi_b] = std::minmax_element(b.begin(), b.end());
    const GridSpec shared{std::min(*lo_a - 3.0 * h_a, *lo_b - 3.0 * h_b),
                          std::max(*hi_a + 3.0 * h_a, *hi_b + 3.0 * h_b), grid_points};

    PeriodComparison cmp;
    cmp.name_a = name_a;
    cmp.name_b = name_b;
    cmp.a = kde(a, h_a, shared);
    cmp.b = kde(b, h_b, shared);
    cmp.summary_a = summarize(a);
    cmp.summary_b = summarize(b);
    cmp.delta_mean = cmp.summary_b.mean - cmp.summary_a.mean;
    cmp.delta_std = cmp.summary_b.std - cmp.summary_a.std;
    cmp.delta_p01 = cmp.summary_b.p01 - cmp.summary_a.p01;
    cmp.delta_p99 = cmp.summary_b.p99 - cmp.summary_a.p99;
    return cmp;
}

PeriodComparison compare_periods(const HourlySeries& series, const NamedWindow& a,
                                 const NamedWindow& b, std::optional<double> bandwidth,
                                 std::size_t grid_points) {
    const auto sa = series.slice(a.range).present_values();
    const auto sb = series.slice(b.range).present_values();
    return compare_samples(sa, a.name, sb, b.name, bandwidth, grid_points);
}

PeriodComparison compare_periods(const DailySeries& series, const NamedWindow& a,
                                 const NamedWindow& b, std::optional<double> bandwidth,
                                 std::size_t grid_points) {
    const auto sa = series.slice(a.range).present_values();
    const auto sb = series.slice(b.range).present_values();
    return compare_samples(sa, a.name, sb, b.name, bandwidth, grid_points);
}

}  // namespace gridstress
