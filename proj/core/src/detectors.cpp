#include "gnsssim/detectors.hpp"

#include "gnsssim/errors.hpp"

#include <cmath>

namespace gnss {

// ---------------------------------------------------------------------------
// Mode machine
// ---------------------------------------------------------------------------

bool TestResults::any_fail() const {
    const auto failed = [](const std::optional<TestOutcome>& o) {
        return o && *o == TestOutcome::Fail;
    };
    return failed(location) || failed(clock) || failed(doppler);
}

bool TestResults::conclusive_pass() const {
    if (any_fail()) return false;
    const auto passed = [](const std::optional<TestOutcome>& o) {
        return o && *o == TestOutcome::Pass;
    };
    const auto inconclusive = [](const std::optional<TestOutcome>& o) {
        return o && *o == TestOutcome::Inconclusive;
    };
    if (inconclusive(location) || inconclusive(clock) || inconclusive(doppler)) return false;
    return passed(location) || passed(clock) || passed(doppler);
}

ModeState mode_step(ModeState state, const EpochStatus& status,
                    const std::optional<TestResults>& tests, double t,
                    const std::optional<PvtSolution>& solution, int quarantine_epochs) {
    state.accepted.clear();
    const bool lock_ok = status.locked && status.n_sats >= 4;

    switch (state.mode) {
    case Mode::Normal:
        if (tests) state.warned_ignored_tests = true; // ignored with warning
        if (!lock_ok || status.suspicious) {
            state.mode = Mode::Alert;
            state.entered_at = t;
            state.pending.clear();
        }
        break;

    case Mode::Alert:
        if (solution) state.pending.push_back(*solution);
        if (lock_ok && tests) {
            if (tests->any_fail()) {
                // All PVT solutions obtained in alert mode are discarded.
                state.mode = Mode::UnderAttack;
                state.entered_at = t;
                state.pending.clear();
                state.quarantine_passes = 0;
            } else if (tests->conclusive_pass()) {
                state.mode = Mode::Normal;
                state.entered_at = t;
                state.accepted = std::move(state.pending);
                state.pending.clear();
            }
            // Inconclusive: remain in Alert.
        }
        break;

    case Mode::UnderAttack:
        if (lock_ok && tests && tests->conclusive_pass()) {
            if (++state.quarantine_passes >= quarantine_epochs) {
                state.mode = Mode::Normal;
                state.entered_at = t;
                state.quarantine_passes = 0;
            }
        } else {
            state.quarantine_passes = 0;
        }
        break;
    }
    return state;
}

// ---------------------------------------------------------------------------
// Location Inertial Test
// ---------------------------------------------------------------------------

InertialPrediction inertial_predict(const ReceiverState& propagated, const ImuErrorModel& imu,
                                    double dt, std::mt19937_64& rng) {
    if (dt < 0.0) throw ConfigError("negative dead-reckoning interval");
    const double radius = imu.error(dt);

    InertialPrediction out;
    out.uncertainty = radius;
    out.pos = propagated.pos;
    if (radius > 0.0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
        if (dir.norm() > 0.0) dir.normalize();
        std::uniform_real_distribution<double> mag(0.0, radius);
        out.pos += mag(rng) * dir;
    }
    return out;
}

LocationTestResult location_test(const InertialPrediction& predicted, const PvtSolution& solved,
                                 double k_sigma) {
    LocationTestResult r;
    r.discrepancy = (predicted.pos - solved.pos).norm();
    r.pass = r.discrepancy <= k_sigma * predicted.uncertainty;
    return r;
}

// ---------------------------------------------------------------------------
// Kalman-filtered dead reckoning
// ---------------------------------------------------------------------------

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

void check_psd(Mat6& p) {
    p = ((p + p.transpose()) / 2.0).eval(); // re-symmetrize
    const Eigen::SelfAdjointEigenSolver<Mat6> es(p);
    if (es.eigenvalues().minCoeff() < -1e-6) {
        throw NumericError("covariance not positive semidefinite");
    }
}

} // namespace

KalmanState kalman_predict(KalmanState ks, double dt) {
    if (dt <= 0.0) throw ConfigError("prediction interval must be positive");
    check_psd(ks.P);

    Mat6 phi = Mat6::Identity();
    phi.topRightCorner<3, 3>() = dt * Eigen::Matrix3d::Identity();

    // White-acceleration process noise.
    Mat6 q = Mat6::Zero();
    const double q3 = ks.q_accel * dt * dt * dt / 3.0;
    const double q2 = ks.q_accel * dt * dt / 2.0;
    const double q1 = ks.q_accel * dt;
    q.topLeftCorner<3, 3>() = q3 * Eigen::Matrix3d::Identity();
    q.topRightCorner<3, 3>() = q2 * Eigen::Matrix3d::Identity();
    q.bottomLeftCorner<3, 3>() = q2 * Eigen::Matrix3d::Identity();
    q.bottomRightCorner<3, 3>() = q1 * Eigen::Matrix3d::Identity();

    // An IMU velocity bias is unobservable during holdover; its integrated
    // position effect (sigma_b * gap)^2 per axis is added incrementally so the
    // uncertainty radius grows linearly with the gap length.
    const double t0 = ks.gap_elapsed;
    const double bias_inc = ks.vel_bias_sigma * ks.vel_bias_sigma * (2.0 * t0 * dt + dt * dt);
    q.topLeftCorner<3, 3>() += bias_inc * Eigen::Matrix3d::Identity();

    ks.x = phi * ks.x;
    ks.P = phi * ks.P * phi.transpose() + q;
    ks.gap_elapsed += dt;
    return ks;
}

KalmanState kalman_update(KalmanState ks, const Vec3& measured_pos, const Eigen::Matrix3d& R,
                          bool gnss_fix) {
    check_psd(ks.P);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(R);
    if (es.eigenvalues().minCoeff() < 0.0) {
        throw NumericError("measurement covariance not PSD");
    }

    Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
    h.leftCols<3>() = Eigen::Matrix3d::Identity();

    const Eigen::Matrix3d s = h * ks.P * h.transpose() + R;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(s);
    if (!lu.isInvertible()) throw NumericError("singular innovation covariance");

    const Eigen::Matrix<double, 6, 3> k = ks.P * h.transpose() * lu.inverse();
    ks.x += k * (measured_pos - h * ks.x);
    const Mat6 ikh = Mat6::Identity() - k * h;
    ks.P = (ikh * ks.P * ikh.transpose() + k * R * k.transpose()).eval();
    if (gnss_fix) ks.gap_elapsed = 0.0;
    return ks;
}

// ---------------------------------------------------------------------------
// Clock Offset Test
// ---------------------------------------------------------------------------

double ClockModel::envelope_rate(ClockClass c) {
    switch (c) {
    case ClockClass::QuartzStable:
        // Microsecond-level holdover over ~350 s.
        return 2.6e-9;
    case ClockClass::QuartzCommodity:
        // Tens of milliseconds of instability within a couple of minutes.
        return 2.2e-4;
    }
    return 0.0;
}

ClockPrediction clock_predict(const ClockModel& cm, double t) {
    if (t < cm.last_sync_time) throw ConfigError("clock prediction before last sync");
    const double dt = t - cm.last_sync_time;
    ClockPrediction p;
    p.expected = cm.last_offset + cm.drift_rate * dt;
    p.envelope = ClockModel::kFloor + ClockModel::envelope_rate(cm.device_class) * dt;
    return p;
}

ClockTestResult clock_test(const ClockModel& cm, double solved_offset, double t) {
    const ClockPrediction p = clock_predict(cm, t);
    ClockTestResult r;
    r.discrepancy = std::abs(solved_offset - p.expected);
    r.pass = r.discrepancy <= p.envelope;
    return r;
}

// ---------------------------------------------------------------------------
// Doppler Shift Test
// ---------------------------------------------------------------------------

const std::deque<DopplerSample> DopplerHistory::kEmpty;

void DopplerHistory::push(int sat_id, double t, double shift) {
    auto& buf = buffers_[sat_id];
    if (!buf.empty() && t <= buf.back().t) {
        throw ConfigError("Doppler samples must be time-ordered");
    }
    buf.push_back({t, shift});
    while (buf.size() > capacity_) buf.pop_front();
}

const std::deque<DopplerSample>& DopplerHistory::samples(int sat_id) const {
    const auto it = buffers_.find(sat_id);
    return it == buffers_.end() ? kEmpty : it->second;
}

std::vector<int> DopplerHistory::satellites() const {
    std::vector<int> out;
    out.reserve(buffers_.size());
    for (const auto& [sat, buf] : buffers_) {
        if (buf.size() >= kMinSamples) out.push_back(sat);
    }
    return out;
}

DopplerFit dst_fit(const DopplerHistory& history, int sat_id) {
    const auto& buf = history.samples(sat_id);
    if (buf.size() < DopplerHistory::kMinSamples) {
        throw NumericError("insufficient Doppler samples for satellite " + std::to_string(sat_id) +
                           " (" + std::to_string(buf.size()) + ")");
    }

    // Centered least squares for conditioning, intercept mapped back to t = 0.
    const double n = static_cast<double>(buf.size());
    double mt = 0.0, md = 0.0;
    for (const auto& s : buf) {
        mt += s.t;
        md += s.shift;
    }
    mt /= n;
    md /= n;
    double stt = 0.0, std_ = 0.0;
    for (const auto& s : buf) {
        stt += (s.t - mt) * (s.t - mt);
        std_ += (s.t - mt) * (s.shift - md);
    }
    if (stt <= 0.0) throw NumericError("degenerate Doppler sample times");

    DopplerFit fit;
    fit.sat_id = sat_id;
    fit.rate = std_ / stt;
    fit.intercept = md - fit.rate * mt;
    fit.window_end = buf.back().t;

    double ss = 0.0;
    for (const auto& s : buf) {
        const double r = s.shift - (fit.intercept + fit.rate * s.t);
        ss += r * r;
    }
    fit.sigma = std::max(1.0, std::sqrt(ss / n)); // 1 Hz floor
    return fit;
}

DopplerPrediction dst_predict(const DopplerFit& fit, double t, const DstConfig& cfg) {
    const double extrap = t - fit.window_end;
    if (extrap > cfg.horizon_s) {
        throw NumericError("Doppler prediction horizon exceeded (" + std::to_string(extrap) +
                           " s)");
    }
    DopplerPrediction p;
    p.shift = fit.intercept + fit.rate * t;
    p.band = std::max(cfg.min_band_hz, cfg.k_sigma * fit.sigma) +
             cfg.band_growth_hz_per_s * std::max(0.0, extrap);
    return p;
}

DstTestResult dst_test(const std::map<int, DopplerPrediction>& predicted,
                       const std::map<int, double>& measured, const DstConfig& cfg) {
    DstTestResult r;
    for (const auto& [sat, pred] : predicted) {
        const auto it = measured.find(sat);
        if (it == measured.end()) continue;
        const double disc = std::abs(it->second - pred.shift);
        r.discrepancies[sat] = disc;
        r.max_discrepancy = std::max(r.max_discrepancy, disc);
        ++r.n_checked;
        if (disc > pred.band) ++r.n_out_of_band;
    }
    if (r.n_checked == 0) {
        r.outcome = TestOutcome::Inconclusive; // continued Alert, never a pass
    } else {
        r.outcome = r.n_out_of_band >= cfg.m_of_n ? TestOutcome::Fail : TestOutcome::Pass;
    }
    return r;
}

} // namespace gnss
