#include "gnsssim/series.hpp"

#include "gnsssim/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace gnss {

namespace {

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check_lengths(const SeriesCollection& series) {
    for (const auto& [name, values] : series.columns) {
        if (values.size() != series.t.size()) {
            throw ConfigError("series '" + name + "' length " + std::to_string(values.size()) +
                              " does not match time axis length " +
                              std::to_string(series.t.size()));
        }
    }
}

} // namespace

std::string write_series(const SeriesCollection& series, SeriesFormat format) {
    check_lengths(series);

    if (format == SeriesFormat::Csv) {
        std::ostringstream out;
        out << "t";
        for (const auto& [name, values] : series.columns) {
            (void)values;
            out << ',' << name;
        }
        out << '\n';
        for (std::size_t i = 0; i < series.t.size(); ++i) {
            out << fmt6(series.t[i]);
            for (const auto& [name, values] : series.columns) {
                (void)name;
                out << ',' << fmt6(values[i]);
            }
            out << '\n';
        }
        return out.str();
    }

    // JSON: array of records, one per time point.
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        nlohmann::ordered_json row;
        row["t"] = std::stod(fmt6(series.t[i]));
        for (const auto& [name, values] : series.columns) {
            row[name] = std::stod(fmt6(values[i]));
        }
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

SeriesCollection read_series_csv(const std::string& text) {
    SeriesCollection out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty series file");

    std::vector<std::string> names;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) names.push_back(cell);
    }
    if (names.empty() || names[0] != "t") throw ParseError("series header must start with 't'");
    for (std::size_t i = 1; i < names.size(); ++i) out.add(names[i], {});

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw ParseError("bad numeric cell '" + cell + "'", line_no);
            }
            if (col == 0) out.t.push_back(v);
            else if (col <= out.columns.size()) out.columns[col - 1].second.push_back(v);
            else throw ParseError("too many cells", line_no);
            ++col;
        }
        if (col != names.size()) throw ParseError("cell count mismatch", line_no);
    }
    return out;
}

} // namespace gnss
