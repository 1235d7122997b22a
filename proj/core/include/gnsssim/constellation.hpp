#pragma once

#include "gnsssim/geodesy.hpp"

#include <cstdint>
#include <vector>

namespace gnss {

/// Broadcast-style orbital elements plus clock polynomial for one satellite.
/// Angles in radians, times in GPS seconds of week.
struct SatelliteEphemeris {
    int sat_id = 0;       // PRN
    double sqrt_a = 0.0;  // sqrt(semi-major axis), sqrt(m)
    double e = 0.0;       // eccentricity
    double i0 = 0.0;      // inclination at toe
    double omega0 = 0.0;  // longitude of ascending node at week epoch
    double omega = 0.0;   // argument of perigee
    double m0 = 0.0;      // mean anomaly at toe
    double delta_n = 0.0; // mean motion correction, rad/s
    double omega_dot = 0.0;
    double idot = 0.0;
    double toe = 0.0;     // ephemeris reference time, s of week
    // Harmonic corrections (zero when absent from the source).
    double cuc = 0.0, cus = 0.0;
    double crc = 0.0, crs = 0.0;
    double cic = 0.0, cis = 0.0;
    // Clock polynomial.
    double af0 = 0.0, af1 = 0.0, af2 = 0.0;
    double toc = 0.0;
    int week = 0;
};

struct SatState {
    int sat_id = 0;
    double t = 0.0;
    Vec3 pos = Vec3::Zero(); // ECEF, m
    Vec3 vel = Vec3::Zero(); // ECEF, m/s
};

struct ReceiverState {
    double t = 0.0;
    Vec3 pos = Vec3::Zero();
    Vec3 vel = Vec3::Zero();
};

/// Keplerian propagation of a broadcast ephemeris to time t (s of week).
/// Velocity comes from the analytic derivative of the same model.
/// Throws NumericError if Kepler's equation does not converge, and if
/// |t - toe| exceeds the validity window (7200 s).
SatState sat_state(const SatelliteEphemeris& eph, double t);

/// True iff the satellite is above mask_deg elevation (inclusive) at rx.
bool visible(const SatState& sat, const ReceiverState& rx, double mask_deg = 10.0);

/// Doppler shift f_r - f_t of a carrier at f_t hertz, positive when the
/// satellite approaches the receiver.
double doppler_shift(const SatState& sat, const ReceiverState& rx, double f_t);

struct SynthOptions {
    // Ground region the constellation is validated against: every grid point
    // (lat_deg +/- span, lon_deg +/- span) must see >= 4 satellites above the
    // mask at every sampled epoch of the validation window.
    double ref_lat_deg = 45.0;
    double ref_lon_deg = 0.0;
    double grid_span_deg = 5.0;
    double window_s = 3600.0;
    double window_step_s = 60.0;
    double mask_deg = 10.0;
};

/// Deterministic GPS-like synthetic constellation (a ~ 2.66e7 m, i ~ 55 deg,
/// e <= 0.02). Guarantees >= 4 visible satellites over the validation grid.
/// Throws ConfigError when n_sats < 4, GeometryError when the coverage
/// constraint cannot be met for the requested satellite count.
std::vector<SatelliteEphemeris> synth_constellation(int n_sats, std::uint64_t seed,
                                                    const SynthOptions& opt = {});

} // namespace gnss
