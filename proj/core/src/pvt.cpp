#include "gnsssim/pvt.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace gnss {

double predict_pseudorange(const Vec3& sat_pos, const Vec3& rx_pos, double t_v) {
    const double range = (sat_pos - rx_pos).norm();
    if (range <= 0.0) throw GeometryError("coincident satellite and receiver");
    return range + kSpeedOfLight * t_v;
}

namespace {

constexpr int kMaxIterations = 20;
constexpr double kPositionTolerance = 1e-4; // m
constexpr double kMaxCondition = 1e12;

void check_entries(const PseudorangeSet& obs) {
    if (obs.entries.size() < 4) {
        throw GeometryError("underdetermined: " + std::to_string(obs.entries.size()) +
                            " satellites, need 4");
    }
    for (std::size_t i = 0; i < obs.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < obs.entries.size(); ++j) {
            if ((obs.entries[i].sat_pos - obs.entries[j].sat_pos).norm() < 1.0) {
                throw GeometryError("duplicate satellite positions");
            }
        }
    }
}

} // namespace

PvtSolution solve_pvt(const PseudorangeSet& obs, const Vec3& guess, double clock_guess) {
    check_entries(obs);
    const int n = static_cast<int>(obs.entries.size());

    Vec3 x = guess;
    double cb = kSpeedOfLight * clock_guess; // clock bias in meters

    PvtSolution sol;
    sol.n_sats = n;

    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd res(n);

    for (int it = 0; it < kMaxIterations; ++it) {
        sol.iterations = it + 1;
        for (int i = 0; i < n; ++i) {
            const Vec3 d = obs.entries[i].sat_pos - x;
            const double range = d.norm();
            if (range < 1.0) throw GeometryError("iterate collided with satellite position");
            const Vec3 u = d / range;
            res(i) = obs.entries[i].pseudorange - range - cb;
            jac(i, 0) = -u.x();
            jac(i, 1) = -u.y();
            jac(i, 2) = -u.z();
            jac(i, 3) = 1.0;
        }

        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac,
                                                    Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double cond = svd.singularValues()(0) / svd.singularValues()(3);
        if (!std::isfinite(cond) || cond > kMaxCondition) {
            throw GeometryError("singular satellite geometry (condition " + std::to_string(cond) +
                                ")");
        }
        const Eigen::Vector4d delta = svd.solve(res);
        x += delta.head<3>();
        cb += delta(3);

        if (delta.head<3>().norm() < kPositionTolerance) {
            sol.converged = true;
            break;
        }
    }

    sol.pos = x;
    sol.clock_offset = cb / kSpeedOfLight;
    sol.residuals.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.residuals[i] =
            obs.entries[i].pseudorange - predict_pseudorange(obs.entries[i].sat_pos, x,
                                                             sol.clock_offset);
    }

    // Velocity from Doppler residuals when every entry carries one:
    // a_i . v_rx = a_i . v_sat + c * D_i / f_t.
    int n_dop = 0;
    for (const auto& e : obs.entries) {
        if (e.has_doppler) ++n_dop;
    }
    if (n_dop >= 4) {
        Eigen::MatrixXd geom(n_dop, 3);
        Eigen::VectorXd rhs(n_dop);
        int row = 0;
        for (const auto& e : obs.entries) {
            if (!e.has_doppler) continue;
            const Vec3 u = (e.sat_pos - x).normalized();
            geom.row(row) = u.transpose();
            rhs(row) = u.dot(e.sat_vel) + kSpeedOfLight * e.doppler / kGpsL1Frequency;
            ++row;
        }
        sol.vel = geom.colPivHouseholderQr().solve(rhs);
        sol.has_velocity = true;
    }
    return sol;
}

DilutionOfPrecision dop(const PseudorangeSet& obs, const Vec3& pos) {
    check_entries(obs);
    const int n = static_cast<int>(obs.entries.size());
    Eigen::MatrixXd geom(n, 4);
    for (int i = 0; i < n; ++i) {
        const Vec3 d = obs.entries[i].sat_pos - pos;
        const double range = d.norm();
        if (range <= 0.0) throw GeometryError("coincident satellite and receiver");
        geom.row(i).head<3>() = (d / range).transpose();
        geom(i, 3) = 1.0;
    }
    const Eigen::Matrix4d gtg = geom.transpose() * geom;
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(gtg);
    if (!lu.isInvertible()) throw GeometryError("singular geometry matrix");
    const Eigen::Matrix4d q = lu.inverse();
    // Guard against numerically near-singular geometries that pass the
    // exact-rank test.
    const double trace = q.trace();
    if (!std::isfinite(trace) || trace > kMaxCondition) {
        throw GeometryError("degenerate geometry (DOP overflow)");
    }
    DilutionOfPrecision d;
    d.pdop = std::sqrt(q(0, 0) + q(1, 1) + q(2, 2));
    d.tdop = std::sqrt(q(3, 3));
    d.gdop = std::sqrt(trace);
    return d;
}

} // namespace gnss
