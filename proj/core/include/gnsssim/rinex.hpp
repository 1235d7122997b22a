#pragma once

#include "gnsssim/constellation.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gnss {

/// One satellite's measurements at one epoch. A missing RINEX field stays
/// empty; blanks are never folded into 0.0.
struct SatObservation {
    std::optional<double> pseudorange; // m
    std::optional<double> doppler;     // Hz, positive = approaching
    std::optional<double> phase;       // cycles
    bool available = false;            // pseudorange present and plausible

    bool operator==(const SatObservation&) const = default;
};

struct ObservationEpoch {
    double t = 0.0; // GPS seconds of week
    std::map<int, SatObservation> sats;

    bool operator==(const ObservationEpoch&) const = default;
};

struct RinexObsHeader {
    double version = 2.11;
    std::string receiver_id;
    Vec3 approx_pos = Vec3::Zero(); // ECEF, m
    std::vector<std::string> obs_types;
    double interval = 0.0; // s, 0 when absent

    bool operator==(const RinexObsHeader&) const = default;
};

struct RinexObsFile {
    RinexObsHeader header;
    std::vector<ObservationEpoch> epochs;
};

struct RinexNavFile {
    std::vector<SatelliteEphemeris> records;
};

/// Observation codes selected for downstream use (Open choice: C1/D1/L1).
struct ObsCodeSelection {
    std::string pseudorange = "C1";
    std::string doppler = "D1";
    std::string phase = "L1";
};

/// Parse a RINEX 2.x observation file. Throws ParseError with a line number
/// on malformed input, including non-monotonic epochs and unsupported versions.
RinexObsFile parse_obs(std::istream& in, const ObsCodeSelection& codes = {});
RinexObsFile parse_obs(const std::string& text, const ObsCodeSelection& codes = {});

/// Parse a RINEX 2.x GPS navigation file. Accepts 'D' exponents.
RinexNavFile parse_nav(std::istream& in);
RinexNavFile parse_nav(const std::string& text);

/// Serialize an observation file back to RINEX 2.11 text (used for the
/// parse/serialize round-trip property).
std::string write_obs(const RinexObsFile& file);

} // namespace gnss
