#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridstress/density.hpp"
#include "gridstress/errors.hpp"

using namespace gridstress;
using namespace std::chrono;

namespace {

double normal_pdf(double x, double mu = 0.0, double sigma = 1.0) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::acos(-1.0)));
}

double trapezoid(const DensityEstimate& e) {
    double acc = 0.0;
    for (std::size_t i = 1; i < e.grid.size(); ++i) {
        acc += 0.5 * (e.density[i] + e.density[i - 1]) * (e.grid[i] - e.grid[i - 1]);
    }
    return acc;
}

std::vector<double> normal_draws(std::size_t n, double mu, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mu, sigma);
    std::vector<double> out(n);
    for (auto& x : out) x = dist(rng);
    return out;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Numerical;
}

}  // namespace

TEST_CASE("point mass with unit bandwidth is the normal peak") {
    const std::vector<double> s = {0.0};
    CHECK(std::abs(kde_at(s, 1.0, 0.0) - 1.0 / std::sqrt(2.0 * std::acos(-1.0))) < 1e-12);
    const auto e = kde(s, 1.0, GridSpec{-1.0, 1.0, 3});
    CHECK(std::abs(e.density[1] - 0.3989422804014327) < 1e-9);
}

TEST_CASE("kde equals a mixture of normal densities") {
    const std::vector<double> s = {-1.0, 0.5, 2.0, 2.25};
    const double h = 0.7;
    for (double x = -4.0; x <= 5.0; x += 0.37) {
        double oracle = 0.0;
        for (double si : s) oracle += normal_pdf(x, si, h);
        CHECK(std::abs(kde_at(s, h, x) - oracle / s.size()) < 1e-14);
    }
}

TEST_CASE("symmetric samples give a symmetric density") {
    const std::vector<double> s = {-1.0, 1.0};
    for (double x = 0.0; x < 5.0; x += 0.1) CHECK(std::abs(kde_at(s, 1.0, x) - kde_at(s, 1.0, -x)) < 1e-12);
}

TEST_CASE("default grid and bandwidth") {
    const auto s = normal_draws(1000, 10.0, 2.0, 1);
    const auto e = kde(s);
    REQUIRE(e.grid.size() == kDefaultGridPoints);
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    CHECK(e.grid.front() == doctest::Approx(*lo - 3.0 * e.bandwidth));
    CHECK(e.grid.back() == doctest::Approx(*hi + 3.0 * e.bandwidth));
    CHECK(e.bandwidth == doctest::Approx(silverman_bandwidth(s)));
    CHECK(e.n_samples == 1000);
    for (double d : e.density) CHECK(d >= 0.0);
    const double integral = trapezoid(e);
    CHECK(integral >= 0.98);
    CHECK(integral <= 1.0);
}

TEST_CASE("silverman bandwidth by hand") {
    // n = 5, std = sqrt(2.5), IQR = 2 -> min(1.5811, 1.4925) = 1.4925
    const std::vector<double> s = {1.0, 2.0, 3.0, 4.0, 5.0};
    const double expected = 0.9 * (2.0 / 1.34) * std::pow(5.0, -0.2);
    CHECK(silverman_bandwidth(s) == doctest::Approx(expected).epsilon(1e-14));
    // Zero IQR falls back to the standard deviation.
    const std::vector<double> spiky = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 10.0};
    CHECK(silverman_bandwidth(spiky) > 0.0);
}

TEST_CASE("kde errors") {
    const std::vector<double> one = {1.0};
    CHECK(kind_of([&] { kde(one); }) == ErrorKind::InsufficientData);
    const std::vector<double> flat = {3.0, 3.0, 3.0};
    CHECK(kind_of([&] { kde(flat); }) == ErrorKind::Degenerate);
    CHECK_NOTHROW(kde(flat, 0.5));
    const std::vector<double> bad = {1.0, std::nan("")};
    CHECK(kind_of([&] { kde(bad); }) == ErrorKind::Validation);
    const std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(kde(two, -1.0), Error);
}

TEST_CASE("large normal sample approaches the true density") {
    const auto s = normal_draws(10000, 0.0, 1.0, 1);
    const auto e = kde(s);
    double sup = 0.0;
    for (std::size_t i = 0; i < e.grid.size(); ++i) sup = std::max(sup, std::abs(e.density[i] - normal_pdf(e.grid[i])));
    CHECK(sup < 0.02);
}

TEST_CASE("translation and scale equivariance") {
    const auto s = normal_draws(300, 0.0, 3.0, 5);
    const double h = 0.8;
    std::vector<double> shifted = s, scaled = s;
    for (auto& x : shifted) x += 125.0;
    for (auto& x : scaled) x *= 4.0;
    for (double x = -10.0; x <= 10.0; x += 0.5) {
        CHECK(std::abs(kde_at(shifted, h, x + 125.0) - kde_at(s, h, x)) < 1e-9);
        CHECK(std::abs(kde_at(scaled, 4.0 * h, 4.0 * x) - kde_at(s, h, x) / 4.0) < 1e-12);
    }
}

TEST_CASE("larger bandwidth never raises the maximum") {
    const auto s = normal_draws(200, 0.0, 1.0, 8);
    const GridSpec grid{-6.0, 6.0, 801};
    double prev = std::numeric_limits<double>::infinity();
    for (double h : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
        const auto e = kde(s, h, grid);
        const double peak = *std::max_element(e.density.begin(), e.density.end());
        CHECK(peak <= prev);
        prev = peak;
    }
}

TEST_CASE("percentiles interpolate linearly") {
    const std::vector<double> s = {4.0, 1.0, 3.0, 2.0, 5.0};
    CHECK(percentile(s, 0.0) == 1.0);
    CHECK(percentile(s, 1.0) == 5.0);
    CHECK(percentile(s, 0.5) == 3.0);
    CHECK(percentile(s, 0.01) == doctest::Approx(1.04));
    CHECK(percentile(s, 0.99) == doctest::Approx(4.96));
}

TEST_CASE("period comparison") {
    const auto a = normal_draws(672, 2000.0, 100.0, 31);
    SUBCASE("identical windows") {
        const auto c = compare_samples(a, "x", a, "y");
        CHECK(c.delta_mean == 0.0);
        CHECK(c.delta_std == 0.0);
        CHECK(c.delta_p01 == 0.0);
        CHECK(c.delta_p99 == 0.0);
        CHECK(c.a.density == c.b.density);
    }
    SUBCASE("translation") {
        std::vector<double> b = a;
        for (auto& x : b) x += 100.0;
        const auto c = compare_samples(a, "x", b, "y");
        CHECK(c.delta_mean == doctest::Approx(100.0));
        CHECK(std::abs(c.delta_std) < 1e-9);
        CHECK(c.a.grid == c.b.grid);
        CHECK(c.a.grid.front() <= *std::min_element(a.begin(), a.end()));
        CHECK(c.a.grid.back() >= *std::max_element(b.begin(), b.end()));
    }
    SUBCASE("planted variance change") {
        const auto base = normal_draws(672, 0.0, 1.0, 41);
        const auto wide = normal_draws(672, 0.0, 2.0, 42);
        const auto c = compare_samples(base, "before", wide, "after");
        CHECK(c.delta_std > 0.0);
        CHECK(c.delta_std == doctest::Approx(1.0).epsilon(0.15));
        CHECK(c.delta_p99 > 0.0);
        CHECK(c.delta_p01 < 0.0);
    }
    SUBCASE("short window is named") {
        const std::vector<double> one = {1.0};
        try {
            compare_samples(a, "jan2019", one, "jan2020");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InsufficientData);
            CHECK(std::string(e.what()).find("jan2020") != std::string::npos);
        }
    }
}

TEST_CASE("compare_periods slices by window") {
    const HourStamp start = hour_stamp(year{2020} / January / 1, 1);
    std::vector<Sample> v(24 * 14);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < 24 * 7 ? 10.0 + (i % 24) : 20.0 + (i % 24);
    const HourlySeries s("R", Variable::Demand, start, v);
    const NamedWindow w1{"w1", {year{2020} / 1 / 1, year{2020} / 1 / 7}};
    const NamedWindow w2{"w2", {year{2020} / 1 / 8, year{2020} / 1 / 14}};
    const auto c = compare_periods(s, w1, w2);
    CHECK(c.summary_a.n == 168);
    CHECK(c.delta_mean == doctest::Approx(10.0));
    const NamedWindow empty{"later", {year{2021} / 1 / 1, year{2021} / 1 / 7}};
    CHECK(kind_of([&] { compare_periods(s, w1, empty); }) == ErrorKind::InsufficientData);
}
