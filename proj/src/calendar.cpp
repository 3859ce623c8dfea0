#include "gridstress/calendar.hpp"

#include <cstdio>

#include "gridstress/errors.hpp"

namespace gridstress {

using namespace std::chrono;

namespace {

// Monday 1970-01-05 00:00, in hours since the epoch.
constexpr long long kMondayReference = 96;

long long floor_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

bool DateRange::contains(Date d) const {
    return sys_days{d} >= sys_days{first} && sys_days{d} <= sys_days{last};
}

int DateRange::days() const { return days_between(first, last) + 1; }

HourStamp DateRange::first_hour() const { return hour_stamp(first, 1); }

HourStamp DateRange::last_hour() const { return hour_stamp(last, 24); }

HourStamp to_hour(Timestamp t) {
    auto h = floor<hours>(t);
    if (h != t) {
        throw Error(ErrorKind::Alignment,
                    "timestamp is not on an hour boundary: " +
                        std::to_string(t.time_since_epoch().count()) + " s");
    }
    return h;
}

int hour_of_week(HourStamp t) {
    long long h = t.time_since_epoch().count() - kMondayReference;
    return static_cast<int>(floor_mod(h - 1, 168)) + 1;
}

int hour_of_week(Timestamp t) { return hour_of_week(to_hour(t)); }

Date day_of(HourStamp t) { return Date{floor<days>(t - hours{1})}; }

int hour_of_day(HourStamp t) {
    auto shifted = t - hours{1};
    return static_cast<int>((shifted - floor<days>(shifted)).count()) + 1;
}

HourStamp hour_stamp(Date d, int hour) { return sys_days{d} + hours{hour}; }

Date first_monday(int year, unsigned month) {
    return Date{sys_days{std::chrono::year{year} / std::chrono::month{month} / Monday[1]}};
}

int days_between(Date from, Date to) {
    return static_cast<int>((sys_days{to} - sys_days{from}).count());
}

Date add_days(Date d, int n) { return Date{sys_days{d} + days{n}}; }

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::string format_hour(HourStamp t) {
    auto day = floor<days>(t);
    Date d{day};
    auto hour = (t - day).count();
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:00", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()),
                  static_cast<int>(hour));
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    static const TimestampFormat format("YYYY-MM-DD");
    if (text.size() != 10) return std::nullopt;
    auto t = format.parse(text);
    if (!t) return std::nullopt;
    return Date{floor<days>(*t)};
}

TimestampFormat::TimestampFormat(std::string_view pattern) : pattern_(pattern) {
    bool seen_hour = false;
    std::size_t i = 0;
    auto starts = [&](std::string_view tok) { return pattern.substr(i, tok.size()) == tok; };
    while (i < pattern.size()) {
        if (starts("YYYY")) {
            tokens_.push_back({Field::Year, 0, 4});
            i += 4;
        } else if (starts("MM")) {
            tokens_.push_back({seen_hour ? Field::Minute : Field::Month, 0, 2});
            i += 2;
        } else if (starts("DD")) {
            tokens_.push_back({Field::Day, 0, 2});
            i += 2;
        } else if (starts("HH")) {
            tokens_.push_back({Field::Hour, 0, 2});
            seen_hour = true;
            i += 2;
        } else if (starts("SS")) {
            tokens_.push_back({Field::Second, 0, 2});
            i += 2;
        } else {
            tokens_.push_back({Field::Literal, pattern[i], 1});
            ++i;
        }
    }
    bool has_year = false, has_month = false, has_day = false;
    for (const auto& tok : tokens_) {
        has_year |= tok.field == Field::Year;
        has_month |= tok.field == Field::Month;
        has_day |= tok.field == Field::Day;
    }
    if (!has_year || !has_month || !has_day) {
        throw Error(ErrorKind::Schema,
                    "timestamp format needs YYYY, MM and DD: '" + pattern_ + "'");
    }
}

std::optional<Timestamp> TimestampFormat::parse(std::string_view text) const {
    int fields[6] = {0, 0, 0, 0, 0, 0};
    std::size_t pos = 0;
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
        const Token& tok = tokens_[t];
        if (tok.field == Field::Literal) {
            if (pos >= text.size() || text[pos] != tok.literal) return std::nullopt;
            ++pos;
            continue;
        }
        int value = 0;
        int digits = 0;
        while (pos < text.size() && digits < tok.width && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
        fields[static_cast<int>(tok.field)] = value;
    }
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos != text.size()) return std::nullopt;

    const int year = fields[0];
    const int hour = fields[3], minute = fields[4], second = fields[5];
    if (hour > 24 || minute > 59 || second > 59) return std::nullopt;
    if (hour == 24 && (minute != 0 || second != 0)) return std::nullopt;
    Date d{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(fields[1])},
           std::chrono::day{static_cast<unsigned>(fields[2])}};
    if (!d.ok()) return std::nullopt;
    return Timestamp{sys_days{d}} + hours{hour} + minutes{minute} + seconds{second};
}

}  // namespace gridstress
