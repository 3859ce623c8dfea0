#include "doctest.h"

#include <random>

#include "gridstress/calendar.hpp"
#include "gridstress/errors.hpp"
#include "gridstress/series.hpp"

using namespace gridstress;
using namespace std::chrono;

namespace {

// Zeller's congruence: 0 = Saturday, 1 = Sunday, 2 = Monday, ...
int zeller(int y, int m, int d) {
    if (m < 3) {
        m += 12;
        y -= 1;
    }
    const int k = y % 100, j = y / 100;
    return (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;
}

Date first_monday_oracle(int y, unsigned m) {
    for (unsigned d = 1; d <= 7; ++d) {
        if (zeller(y, static_cast<int>(m), static_cast<int>(d)) == 2) return year{y} / month{m} / day{d};
    }
    return {};
}

HourlySeries demand(HourStamp start, std::vector<Sample> v) {
    return HourlySeries("R", Variable::Demand, start, std::move(v));
}

Timestamp ts(int y, unsigned m, unsigned d, int h, int min = 0) {
    return sys_days{year{y} / month{m} / day{d}} + hours{h} + minutes{min};
}

}  // namespace

TEST_CASE("hour_of_week anchors on Monday hour ending 01:00") {
    // 2020-03-02 is a Monday.
    CHECK(hour_of_week(ts(2020, 3, 2, 1)) == 1);
    CHECK(hour_of_week(ts(2020, 3, 2, 0)) == 168);
    CHECK(hour_of_week(ts(2020, 3, 3, 1)) == 25);
    CHECK(hour_of_week(ts(2020, 3, 8, 23)) == 167);
    CHECK_THROWS_AS(hour_of_week(ts(2020, 3, 2, 1, 30)), Error);
    try {
        hour_of_week(ts(2020, 3, 2, 1, 30));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Alignment);
    }
}

TEST_CASE("hour_of_week is periodic and steps by one") {
    HourStamp t = hour_stamp(year{2018} / 12 / 30, 5);
    for (int i = 0; i < 2000; ++i, t += hours{1}) {
        CHECK(hour_of_week(t) == hour_of_week(t + hours{168}));
        CHECK(hour_of_week(t + hours{1}) == hour_of_week(t) % 168 + 1);
    }
}

TEST_CASE("first Monday agrees with Zeller's congruence") {
    CHECK(first_monday(2020, 3) == year{2020} / March / 2);
    CHECK(first_monday(2019, 3) == year{2019} / March / 4);
    CHECK(first_monday(2024, 1) == year{2024} / January / 1);
    for (int y = 1990; y <= 2040; ++y) {
        for (unsigned m = 1; m <= 12; ++m) {
            const Date d = first_monday(y, m);
            CHECK(d == first_monday_oracle(y, m));
            CHECK(weekday{sys_days{d}} == Monday);
            CHECK(static_cast<unsigned>(d.day()) <= 7u);
        }
    }
}

TEST_CASE("hour-ending days and formatting") {
    const HourStamp midnight = floor<hours>(ts(2020, 3, 3, 0));
    CHECK(day_of(midnight) == year{2020} / March / 2);
    CHECK(hour_of_day(midnight) == 24);
    CHECK(hour_stamp(year{2020} / March / 2, 24) == midnight);
    CHECK(format_hour(midnight) == "2020-03-03 00:00");
    CHECK(format_date(year{2020} / March / 2) == "2020-03-02");
    CHECK(parse_date("2020-02-29") == year{2020} / February / 29);
    CHECK_FALSE(parse_date("2019-02-29"));
    CHECK_FALSE(parse_date("2019-2-28"));
}

TEST_CASE("timestamp formats") {
    TimestampFormat iso;
    CHECK(iso.parse("2020-03-02 01:00") == ts(2020, 3, 2, 1));
    CHECK(iso.parse("2020-03-02 24:00") == ts(2020, 3, 3, 0));
    CHECK_FALSE(iso.parse("2020-03-02 24:30"));
    CHECK_FALSE(iso.parse("garbage"));
    TimestampFormat us("MM/DD/YYYY HH:MM");
    CHECK(us.parse("3/2/2020 1:00") == ts(2020, 3, 2, 1));
    TimestampFormat secs("YYYY-MM-DDTHH:MM:SS");
    CHECK(secs.parse("2020-03-02T01:15:30") == ts(2020, 3, 2, 1, 15) + seconds{30});
}

TEST_CASE("daily_aggregate reducers and coverage threshold") {
    const HourStamp start = hour_stamp(year{2020} / March / 2, 1);
    std::vector<Sample> v(48);
    for (int i = 0; i < 24; ++i) v[i] = 100.0;
    for (int i = 0; i < 24; ++i) v[24 + i] = i + 1.0;
    const HourlySeries s = demand(start, v);

    const DailySeries sum = daily_aggregate(s, Reducer::Sum, 24);
    REQUIRE(sum.size() == 2);
    CHECK(*sum.values()[0] == 2400.0);
    CHECK(sum.coverage()[0] == 24);
    CHECK(*daily_aggregate(s, Reducer::Max, 24).values()[1] == 24.0);
    CHECK(*daily_aggregate(s, Reducer::Min, 24).values()[1] == 1.0);
    CHECK(*daily_aggregate(s, Reducer::Mean, 24).values()[1] == 12.5);

    for (int i = 0; i < 4; ++i) v[i] = std::nullopt;
    const DailySeries gapped = daily_aggregate(demand(start, v), Reducer::Sum, 24);
    CHECK_FALSE(gapped.values()[0]);
    CHECK(gapped.coverage()[0] == 20);

    CHECK(daily_aggregate(HourlySeries{}, Reducer::Sum, 0).empty());
}

TEST_CASE("daily sum conserves the hourly total") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(500.0, 3000.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Sample> v(24 * 9);
        double total = 0.0;
        for (auto& x : v) {
            x = std::round(u(rng));  // integers keep the sums exact
            total += *x;
        }
        const DailySeries d = daily_aggregate(demand(hour_stamp(year{2021} / 1 / 4, 1), v), Reducer::Sum, 24);
        double daily = 0.0;
        for (auto x : d.values()) daily += *x;
        CHECK(daily == total);
    }
}

TEST_CASE("slicing clips to the covered range") {
    const HourStamp start = hour_stamp(year{2020} / March / 2, 1);
    const HourlySeries s = demand(start, std::vector<Sample>(72, 1.0));
    const HourlySeries mid = s.slice(DateRange{year{2020} / March / 3, year{2020} / March / 3});
    CHECK(mid.size() == 24);
    CHECK(mid.start() == hour_stamp(year{2020} / March / 3, 1));
    CHECK(s.slice(DateRange{year{2020} / March / 1, year{2020} / March / 10}).size() == 72);
    CHECK(s.slice(DateRange{year{2021} / 1 / 1, year{2021} / 1 / 2}).empty());
    CHECK_FALSE(s.at(start - hours{1}));
}

TEST_CASE("DailySeries rejects unordered dates") {
    const Date d = year{2020} / 1 / 1;
    CHECK_THROWS_AS(DailySeries("R", Variable::Demand, {d, d}, {1.0, 2.0}, {24, 24}), Error);
    CHECK_THROWS_AS(DailySeries("R", Variable::Demand, {d}, {1.0}, {25}), Error);
}

TEST_CASE("align_series pairs first Mondays") {
    // 2019 and 2020 March, values encode the source date.
    auto march = [](int y) {
        const HourStamp start = hour_stamp(year{y} / March / 1, 1);
        std::vector<Sample> v(31 * 24);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = y * 10000.0 + static_cast<double>(static_cast<unsigned>(day_of(start + hours{i}).day())) * 100 +
                   hour_of_day(start + hours{i});
        }
        return demand(start, v);
    };
    const HourlySeries a = march(2019), b = march(2020);
    const auto rows = align_series(a, b, 3);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows[0].day_offset == 0);
    CHECK(rows[0].hour == 1);
    CHECK(*rows[0].a == 20190401.0);  // March 4 2019, hour 1
    CHECK(*rows[0].b == 20200201.0);  // March 2 2020, hour 1

    // The 2019 series ends first: its trailing rows are MISSING.
    CHECK_FALSE(rows.back().a);
    CHECK(rows.back().b);

    const auto mirrored = align_series(b, a, 3);
    REQUIRE(mirrored.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(mirrored[i].a == rows[i].b);
        CHECK(mirrored[i].b == rows[i].a);
    }

    for (const auto& r : align_series(a, a, 3)) CHECK(r.a == r.b);
    CHECK_THROWS_AS(align_series(a, b, 7), Error);
}
