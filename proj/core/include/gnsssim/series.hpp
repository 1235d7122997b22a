#pragma once

#include <string>
#include <vector>

namespace gnss {

/// Named time-series sharing one time axis.
struct SeriesCollection {
    std::vector<double> t;
    std::vector<std::pair<std::string, std::vector<double>>> columns;

    void add(std::string name, std::vector<double> values) {
        columns.emplace_back(std::move(name), std::move(values));
    }
};

enum class SeriesFormat { Csv, Json };

/// Deterministic serialization: stable column order, 6 significant digits.
/// Throws ConfigError when a column length disagrees with the time axis.
std::string write_series(const SeriesCollection& series, SeriesFormat format);

/// Parse back what write_series produced (round-trip checks, report command).
SeriesCollection read_series_csv(const std::string& text);

} // namespace gnss
