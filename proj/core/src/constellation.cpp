#include "gnsssim/constellation.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gnss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEphemerisValidity = 7200.0; // s
constexpr int kMaxKeplerIterations = 30;

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    return a < 0.0 ? a + 2.0 * kPi : a;
}

// Solve M = E - e*sin(E) by Newton iteration.
double eccentric_anomaly(double mean_anomaly, double e) {
    double ecc = mean_anomaly;
    for (int it = 0; it < kMaxKeplerIterations; ++it) {
        const double delta = (ecc - e * std::sin(ecc) - mean_anomaly) / (1.0 - e * std::cos(ecc));
        ecc -= delta;
        if (std::abs(delta) < 1e-12) return ecc;
    }
    throw NumericError("Kepler iteration did not converge");
}

} // namespace

SatState sat_state(const SatelliteEphemeris& eph, double t) {
    const double dt = t - eph.toe;
    if (std::abs(dt) > kEphemerisValidity) {
        throw NumericError("ephemeris stale for satellite " + std::to_string(eph.sat_id));
    }

    const double a = eph.sqrt_a * eph.sqrt_a;
    const double n = std::sqrt(kEarthGM / (a * a * a)) + eph.delta_n;
    const double mean = eph.m0 + n * dt;
    const double ecc = eccentric_anomaly(mean, eph.e);

    const double sin_e = std::sin(ecc);
    const double cos_e = std::cos(ecc);
    const double sq1me2 = std::sqrt(1.0 - eph.e * eph.e);
    const double nu = std::atan2(sq1me2 * sin_e, cos_e - eph.e);

    const double phi = nu + eph.omega; // argument of latitude
    const double sin2p = std::sin(2.0 * phi);
    const double cos2p = std::cos(2.0 * phi);

    const double u = phi + eph.cus * sin2p + eph.cuc * cos2p;
    const double r = a * (1.0 - eph.e * cos_e) + eph.crs * sin2p + eph.crc * cos2p;
    const double inc = eph.i0 + eph.idot * dt + eph.cis * sin2p + eph.cic * cos2p;

    const double node = eph.omega0 + (eph.omega_dot - kEarthRotationRate) * dt -
                        kEarthRotationRate * eph.toe;

    const double cu = std::cos(u), su = std::sin(u);
    const double ci = std::cos(inc), si = std::sin(inc);
    const double cn = std::cos(node), sn = std::sin(node);

    const double xp = r * cu;
    const double yp = r * su;

    SatState s;
    s.sat_id = eph.sat_id;
    s.t = t;
    s.pos = {xp * cn - yp * ci * sn, xp * sn + yp * ci * cn, yp * si};

    // Analytic time derivatives of the same chain.
    const double e_dot = n / (1.0 - eph.e * cos_e);
    const double nu_dot = e_dot * sq1me2 / (1.0 - eph.e * cos_e);
    const double u_dot = nu_dot * (1.0 + 2.0 * (eph.cus * cos2p - eph.cuc * sin2p));
    const double r_dot = a * eph.e * sin_e * e_dot + 2.0 * nu_dot * (eph.crs * cos2p - eph.crc * sin2p);
    const double i_dot = eph.idot + 2.0 * nu_dot * (eph.cis * cos2p - eph.cic * sin2p);
    const double node_dot = eph.omega_dot - kEarthRotationRate;

    const double xp_dot = r_dot * cu - r * su * u_dot;
    const double yp_dot = r_dot * su + r * cu * u_dot;

    s.vel = {xp_dot * cn - yp_dot * ci * sn + yp * si * sn * i_dot - s.pos.y() * node_dot,
             xp_dot * sn + yp_dot * ci * cn - yp * si * cn * i_dot + s.pos.x() * node_dot,
             yp_dot * si + yp * ci * i_dot};
    return s;
}

bool visible(const SatState& sat, const ReceiverState& rx, double mask_deg) {
    const double el = elevation_angle(rx.pos, sat.pos);
    return el >= mask_deg * kPi / 180.0;
}

double doppler_shift(const SatState& sat, const ReceiverState& rx, double f_t) {
    const Vec3 los = sat.pos - rx.pos;
    const double range = los.norm();
    if (range <= 0.0) {
        throw GeometryError("doppler undefined for coincident satellite and receiver");
    }
    const Vec3 v_rel = sat.vel - rx.vel;
    return -f_t * v_rel.dot(los / range) / kSpeedOfLight;
}

namespace {

// ENU direction (azimuth from north, elevation) to an ECEF unit vector at the
// given ground position.
Vec3 sky_direction(const Vec3& ground, double az, double el) {
    const Vec3 up = ground.normalized();
    Vec3 east = Vec3::UnitZ().cross(up);
    east.normalize();
    const Vec3 north = up.cross(east);
    return (std::cos(el) * (std::sin(az) * east + std::cos(az) * north) + std::sin(el) * up)
        .normalized();
}

} // namespace

std::vector<SatelliteEphemeris> synth_constellation(int n_sats, std::uint64_t seed,
                                                    const SynthOptions& opt) {
    if (n_sats < 4) {
        throw ConfigError("synthetic constellation needs at least 4 satellites");
    }

    const double deg = kPi / 180.0;
    const double a_nominal = 2.66e7;
    const double inc_nominal = 55.0 * deg;
    const double t_mid = opt.window_s / 2.0;
    const Vec3 ref = geodetic_to_ecef(opt.ref_lat_deg * deg, opt.ref_lon_deg * deg, 0.0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Anchors are placed high in the sky over the reference region at the
    // window midpoint; their 12 h orbits keep them above the mask across the
    // whole validation window. The rest are spread at random for realism.
    const int n_anchor = std::min(n_sats, std::max(5, 2 * n_sats / 3));

    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<SatelliteEphemeris> set;
        set.reserve(n_sats);

        for (int k = 0; k < n_sats; ++k) {
            SatelliteEphemeris eph;
            eph.sat_id = k + 1;
            eph.sqrt_a = std::sqrt(a_nominal * (1.0 + 2e-4 * (unif(rng) - 0.5)));
            eph.e = 0.01 * unif(rng);
            eph.i0 = inc_nominal + (unif(rng) - 0.5) * 2.0 * deg;
            eph.omega = 0.0;
            eph.omega_dot = -8.0e-9;
            eph.idot = 0.0;
            eph.toe = t_mid;
            eph.toc = t_mid;

            if (k < n_anchor) {
                // Choose a sky position, walk it back to orbital elements.
                for (int tries = 0;; ++tries) {
                    // Slotted azimuths first for spread; a slot aimed at the
                    // polar gap (sub-satellite latitude above the inclination)
                    // can never work, so fall back to fully random azimuths.
                    const double az = tries < 10
                                          ? 2.0 * kPi * (k + unif(rng) * 0.8) / n_anchor
                                          : 2.0 * kPi * unif(rng);
                    const double el = (40.0 + 30.0 * unif(rng)) * deg;
                    const Vec3 d = sky_direction(ref, az, el);
                    const double pd = ref.dot(d);
                    const double disc = pd * pd + a_nominal * a_nominal - ref.squaredNorm();
                    const double range = -pd + std::sqrt(disc);
                    const Vec3 u_sat = (ref + range * d).normalized();
                    const double lat_s = std::asin(std::clamp(u_sat.z(), -1.0, 1.0));
                    if (std::abs(lat_s) > eph.i0 - 1.0 * deg) {
                        if (tries > 200) throw GeometryError("anchor placement failed");
                        continue;
                    }
                    const double lon_s = std::atan2(u_sat.y(), u_sat.x());
                    double u_arg = std::asin(std::sin(lat_s) / std::sin(eph.i0));
                    if (unif(rng) < 0.5) u_arg = kPi - u_arg; // descending branch
                    const double node_lon =
                        lon_s - std::atan2(std::cos(eph.i0) * std::sin(u_arg), std::cos(u_arg));
                    // Invert node = omega0 - rot*toe - rot*(t_mid - toe), omega_dot ~ 0.
                    eph.omega0 = wrap_2pi(node_lon + kEarthRotationRate * t_mid);
                    eph.m0 = wrap_2pi(u_arg);
                    break;
                }
            } else {
                eph.omega0 = 2.0 * kPi * unif(rng);
                eph.m0 = 2.0 * kPi * unif(rng);
            }
            set.push_back(eph);
        }

        // Coverage check over the ground grid and validation window.
        bool ok = true;
        for (double dlat = -opt.grid_span_deg; dlat <= opt.grid_span_deg && ok;
             dlat += opt.grid_span_deg) {
            for (double dlon = -opt.grid_span_deg; dlon <= opt.grid_span_deg && ok;
                 dlon += opt.grid_span_deg) {
                ReceiverState rx;
                rx.pos = geodetic_to_ecef((opt.ref_lat_deg + dlat) * deg,
                                          (opt.ref_lon_deg + dlon) * deg, 0.0);
                for (double t = 0.0; t <= opt.window_s && ok; t += opt.window_step_s) {
                    int n_vis = 0;
                    for (const auto& eph : set) {
                        if (visible(sat_state(eph, t), rx, opt.mask_deg)) ++n_vis;
                    }
                    if (n_vis < 4) ok = false;
                }
            }
        }
        if (ok) return set;
    }
    throw GeometryError(
        "could not satisfy 4-satellite coverage with " + std::to_string(n_sats) +
        " satellites; request more satellites");
}

} // namespace gnss
