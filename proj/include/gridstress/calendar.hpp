#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridstress {

/// Local clock time of a balancing authority. No timezone is attached; the
/// sys_time clock is only used as a proleptic Gregorian calendar.
using Timestamp = std::chrono::sys_seconds;
using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using Date = std::chrono::year_month_day;

/// Inclusive range of calendar dates.
struct DateRange {
    Date first;
    Date last;

    bool contains(Date d) const;
    int days() const;  // number of dates in the range
    HourStamp first_hour() const;  // 01:00 of `first` (hour ending)
    HourStamp last_hour() const;   // 24:00 of `last`, i.e. 00:00 of the next day
};

/// Converts a timestamp to an hour stamp; throws Alignment when the
/// timestamp is not on an hour boundary.
HourStamp to_hour(Timestamp t);

/// Hour-of-week index in 1..168 where hour ending 01:00 on Monday is 1 and
/// Monday 00:00 (Sunday hour ending 24) is 168.
int hour_of_week(HourStamp t);
int hour_of_week(Timestamp t);

/// Calendar day an hour-ending stamp belongs to: 00:00 closes the previous day.
Date day_of(HourStamp t);

/// Hour-ending index within its day, 1..24.
int hour_of_day(HourStamp t);

/// Hour ending `hour` (1..24) of date `d`.
HourStamp hour_stamp(Date d, int hour);

/// Date of the first Monday of the given month.
Date first_monday(int year, unsigned month);

int days_between(Date from, Date to);
Date add_days(Date d, int n);

std::string format_date(Date d);
/// "YYYY-MM-DD HH:MM", with midnight written as 00:00 of the following day.
std::string format_hour(HourStamp t);

/// Strict "YYYY-MM-DD" parser; returns nullopt on malformed or invalid dates.
std::optional<Date> parse_date(std::string_view text);

/// Timestamp pattern built from the tokens YYYY, MM, DD, HH and SS. MM after
/// HH denotes minutes, otherwise the month. Any other character is a literal.
/// Numeric fields accept one up to the token width of digits; an hour of 24
/// is accepted and rolls into the next day.
class TimestampFormat {
public:
    explicit TimestampFormat(std::string_view pattern = "YYYY-MM-DD HH:MM");

    std::optional<Timestamp> parse(std::string_view text) const;
    const std::string& pattern() const { return pattern_; }

private:
    enum class Field { Year, Month, Day, Hour, Minute, Second, Literal };
    struct Token {
        Field field;
        char literal;
        int width;
    };

    std::string pattern_;
    std::vector<Token> tokens_;
};

}  // namespace gridstress
