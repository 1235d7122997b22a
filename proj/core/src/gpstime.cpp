#include "gnsssim/gpstime.hpp"

#include "gnsssim/constants.hpp"

#include <cmath>

namespace gnss {

int expand_two_digit_year(int yy) {
    if (yy >= 100) return yy;
    return yy >= 80 ? 1900 + yy : 2000 + yy;
}

namespace {

// Days since civil epoch 1970-01-01 (Howard Hinnant's algorithm).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

} // namespace

GpsTime civil_to_gps(int year, int month, int day, int hour, int minute, double second) {
    year = expand_two_digit_year(year);
    // GPS epoch: 1980-01-06 00:00:00.
    const long gps_epoch_days = days_from_civil(1980, 1, 6);
    const long days = days_from_civil(year, month, day) - gps_epoch_days;
    const double sec = static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second;
    GpsTime t;
    t.week = static_cast<int>(std::floor(sec / kSecondsPerWeek));
    t.sow = sec - t.week * kSecondsPerWeek;
    return t;
}

} // namespace gnss
