#include "gnsssim/rinex.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"
#include "gnsssim/gpstime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace gnss {

namespace {

constexpr double kMinPlausibleRange = 1.8e7; // m
constexpr double kMaxPlausibleRange = 3.0e7; // m

std::string pad(std::string line, std::size_t width = 80) {
    if (line.size() < width) line.resize(width, ' ');
    return line;
}

std::string_view field(const std::string& line, std::size_t pos, std::size_t len) {
    return std::string_view(line).substr(pos, len);
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' '; });
}

// RINEX floats use 'D' exponents and may be blank.
std::optional<double> parse_double_opt(std::string_view s) {
    std::string buf(s);
    for (char& c : buf) {
        if (c == 'D' || c == 'd') c = 'E';
    }
    const char* begin = buf.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin) return std::nullopt;
    // Trailing garbage beyond whitespace means a malformed field.
    while (*end == ' ') ++end;
    if (*end != '\0') return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

double parse_double(std::string_view s, int line_no, const std::string& what) {
    auto v = parse_double_opt(s);
    if (!v) throw ParseError("malformed numeric field (" + what + ")", line_no);
    return *v;
}

int parse_int(std::string_view s, int line_no, const std::string& what) {
    const double v = parse_double(s, line_no, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ParseError("expected integer field (" + what + ")", line_no);
    }
    return static_cast<int>(v);
}

struct LineReader {
    std::istream& in;
    int line_no = 0;

    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        ++line_no;
        return true;
    }
};

double epoch_time(const std::string& line, int line_no) {
    const int yy = parse_int(field(line, 1, 2), line_no, "epoch year");
    const int mo = parse_int(field(line, 4, 2), line_no, "epoch month");
    const int dd = parse_int(field(line, 7, 2), line_no, "epoch day");
    const int hh = parse_int(field(line, 10, 2), line_no, "epoch hour");
    const int mi = parse_int(field(line, 13, 2), line_no, "epoch minute");
    const double ss = parse_double(field(line, 15, 11), line_no, "epoch second");
    if (mo < 1 || mo > 12 || dd < 1 || dd > 31 || hh < 0 || hh > 23 || mi < 0 || mi > 59 ||
        ss < 0.0 || ss >= 61.0) {
        throw ParseError("epoch date/time out of range", line_no);
    }
    return civil_to_gps(yy, mo, dd, hh, mi, ss).sow;
}

} // namespace

RinexObsFile parse_obs(std::istream& in, const ObsCodeSelection& codes) {
    LineReader rd{in};
    RinexObsFile file;
    std::string raw;

    // --- header ---
    bool header_done = false;
    int n_types = -1;
    while (rd.next(raw)) {
        const std::string line = pad(raw);
        const std::string label(field(line, 60, 20));
        if (label.rfind("RINEX VERSION / TYPE", 0) == 0) {
            file.header.version = parse_double(field(line, 0, 9), rd.line_no, "version");
            if (file.header.version < 2.0 || file.header.version >= 3.0) {
                throw ParseError("unsupported RINEX version " +
                                     std::to_string(file.header.version) + " (2.x required)",
                                 rd.line_no);
            }
            if (line[20] != 'O') throw ParseError("not an observation file", rd.line_no);
        } else if (label.rfind("MARKER NAME", 0) == 0) {
            std::string name(field(line, 0, 60));
            name.erase(name.find_last_not_of(' ') + 1);
            file.header.receiver_id = name;
        } else if (label.rfind("APPROX POSITION XYZ", 0) == 0) {
            for (int i = 0; i < 3; ++i) {
                file.header.approx_pos[i] =
                    parse_double(field(line, 14 * i, 14), rd.line_no, "approx position");
            }
        } else if (label.rfind("# / TYPES OF OBSERV", 0) == 0) {
            if (n_types < 0) n_types = parse_int(field(line, 0, 6), rd.line_no, "obs type count");
            for (int i = 0; i < 9 && static_cast<int>(file.header.obs_types.size()) < n_types; ++i) {
                std::string code(field(line, 6 + 6 * i + 4, 2));
                if (is_blank(code)) break;
                file.header.obs_types.push_back(code);
            }
        } else if (label.rfind("INTERVAL", 0) == 0) {
            if (auto v = parse_double_opt(field(line, 0, 10))) file.header.interval = *v;
        } else if (label.rfind("END OF HEADER", 0) == 0) {
            header_done = true;
            break;
        }
        if (is_blank(label) && !is_blank(raw)) {
            throw ParseError("header line without label", rd.line_no);
        }
    }
    if (!header_done) throw ParseError("missing END OF HEADER", rd.line_no);
    if (file.header.obs_types.empty()) throw ParseError("missing # / TYPES OF OBSERV", rd.line_no);
    if (n_types != static_cast<int>(file.header.obs_types.size())) {
        throw ParseError("observation type count mismatch", rd.line_no);
    }

    const auto code_index = [&](const std::string& code) -> int {
        const auto it = std::find(file.header.obs_types.begin(), file.header.obs_types.end(), code);
        return it == file.header.obs_types.end()
                   ? -1
                   : static_cast<int>(it - file.header.obs_types.begin());
    };
    const int idx_pr = code_index(codes.pseudorange);
    const int idx_do = code_index(codes.doppler);
    const int idx_ph = code_index(codes.phase);

    // --- epochs ---
    while (rd.next(raw)) {
        if (is_blank(raw)) continue;
        std::string line = pad(raw);
        const int epoch_line_no = rd.line_no;
        const int flag = parse_int(field(line, 26, 3), rd.line_no, "epoch flag");

        if (flag > 1) {
            // Special event: skip the announced record lines.
            const int n_skip = parse_int(field(line, 29, 3), rd.line_no, "event record count");
            if (n_skip < 0 || n_skip > 999) throw ParseError("bad event record count", rd.line_no);
            for (int i = 0; i < n_skip; ++i) {
                if (!rd.next(raw)) throw ParseError("truncated event record", rd.line_no);
            }
            continue;
        }

        ObservationEpoch epoch;
        epoch.t = epoch_time(line, epoch_line_no);
        const int n_sats = parse_int(field(line, 29, 3), epoch_line_no, "satellite count");
        if (n_sats <= 0 || n_sats > 99) {
            throw ParseError("implausible satellite count", epoch_line_no);
        }

        // Satellite list, 12 ids per line.
        std::vector<std::pair<char, int>> sat_list;
        int consumed = 0;
        while (consumed < n_sats) {
            if (consumed > 0) {
                if (!rd.next(raw)) throw ParseError("truncated satellite list", rd.line_no);
                line = pad(raw);
            }
            const int batch = std::min(12, n_sats - consumed);
            for (int i = 0; i < batch; ++i) {
                const auto id = field(line, 32 + 3 * i, 3);
                char sys = id[0] == ' ' ? 'G' : id[0];
                const int prn = parse_int(id.substr(1), rd.line_no, "satellite id");
                sat_list.emplace_back(sys, prn);
            }
            consumed += batch;
        }

        // Observation records, 5 values of 16 columns per line.
        const int n_obs = static_cast<int>(file.header.obs_types.size());
        for (const auto& [sys, prn] : sat_list) {
            std::vector<std::optional<double>> values(n_obs);
            for (int i = 0; i < n_obs; ++i) {
                if (i % 5 == 0) {
                    if (!rd.next(raw)) {
                        throw ParseError("truncated observations for satellite " +
                                             std::to_string(prn),
                                         rd.line_no);
                    }
                    line = pad(raw);
                }
                const auto f = field(line, 16 * (i % 5), 14);
                if (!is_blank(f)) {
                    values[i] = parse_double(f, rd.line_no, "observation value");
                }
            }
            if (sys != 'G') continue; // GPS only
            if (prn < 1 || prn > 32) {
                throw ParseError("GPS PRN out of range: " + std::to_string(prn), rd.line_no);
            }

            SatObservation obs;
            if (idx_pr >= 0) obs.pseudorange = values[idx_pr];
            if (idx_do >= 0) obs.doppler = values[idx_do];
            if (idx_ph >= 0) obs.phase = values[idx_ph];
            // Doppler beyond the +/-9 kHz search window is not a credible
            // measurement; flag it invalid.
            if (obs.doppler && std::abs(*obs.doppler) > kMaxDopplerHz) obs.doppler.reset();
            obs.available = obs.pseudorange && *obs.pseudorange >= kMinPlausibleRange &&
                            *obs.pseudorange <= kMaxPlausibleRange;
            epoch.sats[prn] = obs;
        }

        if (!file.epochs.empty() && epoch.t <= file.epochs.back().t) {
            throw ParseError("non-monotonic epoch time", epoch_line_no);
        }
        if (!epoch.sats.empty()) file.epochs.push_back(std::move(epoch));
    }
    return file;
}

RinexObsFile parse_obs(const std::string& text, const ObsCodeSelection& codes) {
    std::istringstream in(text);
    return parse_obs(in, codes);
}

RinexNavFile parse_nav(std::istream& in) {
    LineReader rd{in};
    RinexNavFile file;
    std::string raw;

    bool header_done = false;
    while (rd.next(raw)) {
        const std::string line = pad(raw);
        const std::string label(field(line, 60, 20));
        if (label.rfind("RINEX VERSION / TYPE", 0) == 0) {
            const double version = parse_double(field(line, 0, 9), rd.line_no, "version");
            if (version < 2.0 || version >= 3.0) {
                throw ParseError("unsupported RINEX version", rd.line_no);
            }
            if (line[20] != 'N') throw ParseError("not a GPS navigation file", rd.line_no);
        } else if (label.rfind("END OF HEADER", 0) == 0) {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw ParseError("missing END OF HEADER", rd.line_no);

    while (rd.next(raw)) {
        if (is_blank(raw)) continue;
        std::string line = pad(raw);

        SatelliteEphemeris eph;
        eph.sat_id = parse_int(field(line, 0, 2), rd.line_no, "PRN");
        if (eph.sat_id < 1 || eph.sat_id > 32) {
            throw ParseError("GPS PRN out of range: " + std::to_string(eph.sat_id), rd.line_no);
        }
        const int yy = parse_int(field(line, 3, 2), rd.line_no, "toc year");
        const int mo = parse_int(field(line, 6, 2), rd.line_no, "toc month");
        const int dd = parse_int(field(line, 9, 2), rd.line_no, "toc day");
        const int hh = parse_int(field(line, 12, 2), rd.line_no, "toc hour");
        const int mi = parse_int(field(line, 15, 2), rd.line_no, "toc minute");
        const double ss = parse_double(field(line, 17, 5), rd.line_no, "toc second");
        const GpsTime toc = civil_to_gps(yy, mo, dd, hh, mi, ss);
        eph.toc = toc.sow;
        eph.af0 = parse_double(field(line, 22, 19), rd.line_no, "af0");
        eph.af1 = parse_double(field(line, 41, 19), rd.line_no, "af1");
        eph.af2 = parse_double(field(line, 60, 19), rd.line_no, "af2");

        // Seven orbit lines, four 19-column fields each.
        double orbit[7][4] = {};
        for (int l = 0; l < 7; ++l) {
            if (!rd.next(raw)) {
                throw ParseError("truncated record for satellite " + std::to_string(eph.sat_id),
                                 rd.line_no);
            }
            line = pad(raw);
            for (int f = 0; f < 4; ++f) {
                const auto s = field(line, 3 + 19 * f, 19);
                if (is_blank(s)) continue; // trailing spare fields may be blank
                orbit[l][f] = parse_double(s, rd.line_no, "orbit field");
            }
        }
        eph.crs = orbit[0][1];
        eph.delta_n = orbit[0][2];
        eph.m0 = orbit[0][3];
        eph.cuc = orbit[1][0];
        eph.e = orbit[1][1];
        eph.cus = orbit[1][2];
        eph.sqrt_a = orbit[1][3];
        eph.toe = orbit[2][0];
        eph.cic = orbit[2][1];
        eph.omega0 = orbit[2][2];
        eph.cis = orbit[2][3];
        eph.i0 = orbit[3][0];
        eph.crc = orbit[3][1];
        eph.omega = orbit[3][2];
        eph.omega_dot = orbit[3][3];
        eph.idot = orbit[4][0];
        eph.week = static_cast<int>(orbit[4][2]);

        if (eph.e < 0.0 || eph.e > 0.1) {
            throw ParseError("eccentricity out of range for satellite " +
                                 std::to_string(eph.sat_id),
                             rd.line_no);
        }
        if (eph.toe < 0.0 || eph.toe > kSecondsPerWeek) {
            throw ParseError("toe outside GPS week for satellite " + std::to_string(eph.sat_id),
                             rd.line_no);
        }
        file.records.push_back(eph);
    }
    return file;
}

RinexNavFile parse_nav(const std::string& text) {
    std::istringstream in(text);
    return parse_nav(in);
}

std::string write_obs(const RinexObsFile& file) {
    std::ostringstream out;
    char buf[128];

    std::snprintf(buf, sizeof buf, "%9.2f%-11s%-20s%-20s%-20s", file.header.version, "",
                  "OBSERVATION DATA", "G (GPS)", "RINEX VERSION / TYPE");
    out << buf << '\n';
    std::snprintf(buf, sizeof buf, "%-60s%-20s", file.header.receiver_id.c_str(), "MARKER NAME");
    out << buf << '\n';
    std::snprintf(buf, sizeof buf, "%14.4f%14.4f%14.4f%18s%-20s", file.header.approx_pos.x(),
                  file.header.approx_pos.y(), file.header.approx_pos.z(), "",
                  "APPROX POSITION XYZ");
    out << buf << '\n';
    std::string types;
    std::snprintf(buf, sizeof buf, "%6d", static_cast<int>(file.header.obs_types.size()));
    types = buf;
    for (const auto& t : file.header.obs_types) {
        std::snprintf(buf, sizeof buf, "    %2s", t.c_str());
        types += buf;
    }
    std::snprintf(buf, sizeof buf, "%-60s%-20s", types.c_str(), "# / TYPES OF OBSERV");
    out << buf << '\n';
    if (file.header.interval > 0.0) {
        std::snprintf(buf, sizeof buf, "%10.3f%50s%-20s", file.header.interval, "", "INTERVAL");
        out << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%-60s%-20s", "", "END OF HEADER");
    out << buf << '\n';

    for (const auto& epoch : file.epochs) {
        // Seconds of week back to a nominal calendar time inside the GPS
        // 2019-2038 era is not needed for round-tripping; a fixed reference
        // week starting 2001-01-07 (week 1096) keeps two-digit years valid.
        const double sow = epoch.t;
        const int day = static_cast<int>(sow / 86400.0);
        const double rem = sow - day * 86400.0;
        const int hh = static_cast<int>(rem / 3600.0);
        const int mi = static_cast<int>((rem - hh * 3600.0) / 60.0);
        const double ss = rem - hh * 3600.0 - mi * 60.0;
        std::snprintf(buf, sizeof buf, " %02d %2d %2d %2d %2d%11.7f  %1d%3d", 1, 1, 7 + day, hh, mi,
                      ss, 0, static_cast<int>(epoch.sats.size()));
        out << buf;
        int i = 0;
        for (const auto& [prn, obs] : epoch.sats) {
            (void)obs;
            if (i > 0 && i % 12 == 0) out << "\n" << std::string(32, ' ');
            std::snprintf(buf, sizeof buf, "G%02d", prn);
            out << buf;
            ++i;
        }
        out << '\n';
        for (const auto& [prn, obs] : epoch.sats) {
            (void)prn;
            int col = 0;
            for (const auto& type : file.header.obs_types) {
                std::optional<double> v;
                if (type == "C1") v = obs.pseudorange;
                else if (type == "L1") v = obs.phase;
                else if (type == "D1") v = obs.doppler;
                if (col == 5) {
                    out << '\n';
                    col = 0;
                }
                if (v) {
                    std::snprintf(buf, sizeof buf, "%14.3f  ", *v);
                    out << buf;
                } else {
                    out << std::string(16, ' ');
                }
                ++col;
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace gnss
