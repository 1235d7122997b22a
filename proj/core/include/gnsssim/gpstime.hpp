#pragma once

namespace gnss {

struct GpsTime {
    int week = 0;
    double sow = 0.0; // seconds of week
};

/// Calendar date/time (UTC, no leap-second handling) to GPS week + seconds of week.
/// Two-digit years follow the RINEX 2 convention: 80-99 -> 1900s, 00-79 -> 2000s.
GpsTime civil_to_gps(int year, int month, int day, int hour, int minute, double second);

/// Expand a possibly two-digit year.
int expand_two_digit_year(int yy);

} // namespace gnss
