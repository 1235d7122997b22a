#pragma once

namespace gnss {

// Physical constants (WGS-84 / GPS ICD values).
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kEarthGM = 3.986004418e14;            // m^3/s^2
inline constexpr double kEarthRotationRate = 7.2921151467e-5; // rad/s
inline constexpr double kEarthSemiMajor = 6378137.0;          // m, WGS-84
inline constexpr double kEarthEccSq = 6.69437999014e-3;       // WGS-84 e^2

// GPS L1 carrier.
inline constexpr double kGpsL1Frequency = 1.575e9; // Hz

// Receiver-side Doppler plausibility bound (satellite motion plus
// receiver oscillator offset).
inline constexpr double kMaxDopplerHz = 9000.0;

inline constexpr double kSecondsPerWeek = 604800.0;

} // namespace gnss
