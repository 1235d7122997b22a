#pragma once

#include "gnsssim/constellation.hpp"

#include <vector>

namespace gnss {

struct PseudorangeEntry {
    int sat_id = 0;
    Vec3 sat_pos = Vec3::Zero();
    Vec3 sat_vel = Vec3::Zero();
    double pseudorange = 0.0;     // m
    bool has_doppler = false;
    double doppler = 0.0;         // Hz
};

struct PseudorangeSet {
    double t = 0.0;
    std::vector<PseudorangeEntry> entries;
};

struct PvtSolution {
    Vec3 pos = Vec3::Zero();
    Vec3 vel = Vec3::Zero();
    double clock_offset = 0.0; // t_V, s
    std::vector<double> residuals; // m, per entry
    int n_sats = 0;
    bool converged = false;
    bool has_velocity = false;
    int iterations = 0;
};

struct DilutionOfPrecision {
    double gdop = 0.0;
    double pdop = 0.0;
    double tdop = 0.0;
};

/// rho = |sat - rx| + c * t_V
double predict_pseudorange(const Vec3& sat_pos, const Vec3& rx_pos, double t_v);

/// Iterative linearized least squares over (x, y, z, c*t_V). Converges from
/// the Earth-center default guess for surface receivers. Throws on fewer than
/// 4 entries (the availability signal for Alert mode) and on singular
/// geometry; non-convergence is flagged, not thrown.
PvtSolution solve_pvt(const PseudorangeSet& obs, const Vec3& guess = Vec3::Zero(),
                      double clock_guess = 0.0);

/// Geometry dilution factors at a given position.
DilutionOfPrecision dop(const PseudorangeSet& obs, const Vec3& pos);

} // namespace gnss
