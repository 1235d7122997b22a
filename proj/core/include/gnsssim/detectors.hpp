#pragma once

#include "gnsssim/pvt.hpp"

#include <Eigen/Dense>

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace gnss {

// ---------------------------------------------------------------------------
// Mode machine
// ---------------------------------------------------------------------------

enum class Mode { Normal, Alert, UnderAttack };

enum class TestOutcome { Pass, Fail, Inconclusive };

struct TestResults {
    std::optional<TestOutcome> location;
    std::optional<TestOutcome> clock;
    std::optional<TestOutcome> doppler;

    bool any_fail() const;
    /// True when every enabled test passed and at least one was conclusive.
    bool conclusive_pass() const;
};

struct EpochStatus {
    bool locked = true;
    int n_sats = 0;
    bool suspicious = false; // e.g. solved position/time discontinuity
};

struct ModeState {
    Mode mode = Mode::Normal;
    double entered_at = 0.0;
    std::vector<PvtSolution> pending;  // solutions buffered during Alert
    std::vector<PvtSolution> accepted; // released on Alert -> Normal, cleared each step
    int quarantine_passes = 0;
    bool warned_ignored_tests = false;
};

/// One protocol step. Solutions obtained while in Alert are buffered via
/// `solution`; they are released through `accepted` when the tests clear, and
/// discarded on the transition to UnderAttack.
ModeState mode_step(ModeState state, const EpochStatus& status,
                    const std::optional<TestResults>& tests, double t,
                    const std::optional<PvtSolution>& solution = std::nullopt,
                    int quarantine_epochs = 10);

// ---------------------------------------------------------------------------
// Location Inertial Test
// ---------------------------------------------------------------------------

/// Dead-reckoning error growth law: error(dt) = a*dt^2 + b*dt (meters).
struct ImuErrorModel {
    double a = 0.0; // m/s^2
    double b = 0.0; // m/s

    double error(double dt) const { return a * dt * dt + b * dt; }

    /// Representative low-cost MEMS profile (Crista IMU-15 class).
    static ImuErrorModel crista_like() { return {0.05, 0.5}; }
};

struct InertialPrediction {
    Vec3 pos = Vec3::Zero();
    double uncertainty = 0.0; // m
};

/// Dead-reckoned position after dt seconds without GNSS: the propagated state
/// perturbed by a sampled sensor error of magnitude <= error(dt).
InertialPrediction inertial_predict(const ReceiverState& propagated, const ImuErrorModel& imu,
                                    double dt, std::mt19937_64& rng);

struct LocationTestResult {
    bool pass = false;
    double discrepancy = 0.0; // m
};

/// Fail iff |predicted - solved| > k_sigma * uncertainty.
LocationTestResult location_test(const InertialPrediction& predicted, const PvtSolution& solved,
                                 double k_sigma = 3.0);

// ---------------------------------------------------------------------------
// Kalman-filtered dead reckoning
// ---------------------------------------------------------------------------

struct KalmanState {
    Eigen::Matrix<double, 6, 1> x = Eigen::Matrix<double, 6, 1>::Zero(); // pos, vel
    Eigen::Matrix<double, 6, 6> P = Eigen::Matrix<double, 6, 6>::Identity();
    double q_accel = 0.01;      // white-acceleration PSD, m^2/s^3
    double vel_bias_sigma = 0.5; // unestimated IMU velocity bias, m/s per axis
    double gap_elapsed = 0.0;   // s since last GNSS update

    Vec3 pos() const { return x.head<3>(); }
    Vec3 vel() const { return x.tail<3>(); }
    /// Position uncertainty radius, sqrt(trace of the position block).
    double uncertainty() const { return std::sqrt(P.topLeftCorner<3, 3>().trace()); }
};

/// Constant-velocity prediction. During a GNSS gap the unestimated velocity
/// bias inflates the position covariance so the uncertainty radius grows
/// linearly with holdover time. Throws NumericError for a non-PSD covariance.
KalmanState kalman_predict(KalmanState ks, double dt);

/// Position measurement update (Joseph form). Resets the gap clock when
/// `gnss_fix` is set. Throws NumericError on singular innovation covariance.
KalmanState kalman_update(KalmanState ks, const Vec3& measured_pos, const Eigen::Matrix3d& R,
                          bool gnss_fix = true);

// ---------------------------------------------------------------------------
// Clock Offset Test
// ---------------------------------------------------------------------------

enum class ClockClass { QuartzCommodity, QuartzStable };

struct ClockModel {
    double last_sync_time = 0.0; // s
    double last_offset = 0.0;    // s
    double drift_rate = 0.0;     // s/s
    ClockClass device_class = ClockClass::QuartzCommodity;

    /// Envelope floor; avoids a zero-width acceptance region at dt = 0.
    static constexpr double kFloor = 1e-7; // s
    /// Holdover envelope growth per second for each device class.
    static double envelope_rate(ClockClass c);
};

struct ClockPrediction {
    double expected = 0.0; // s
    double envelope = 0.0; // s
};

ClockPrediction clock_predict(const ClockModel& cm, double t);

struct ClockTestResult {
    bool pass = false;
    double discrepancy = 0.0; // s
};

ClockTestResult clock_test(const ClockModel& cm, double solved_offset, double t);

// ---------------------------------------------------------------------------
// Doppler Shift Test
// ---------------------------------------------------------------------------

struct DopplerSample {
    double t = 0.0;
    double shift = 0.0; // Hz
};

/// Per-satellite ring buffer of measured shifts.
class DopplerHistory {
public:
    explicit DopplerHistory(std::size_t capacity = 50) : capacity_(capacity) {}

    void push(int sat_id, double t, double shift);
    const std::deque<DopplerSample>& samples(int sat_id) const;
    std::vector<int> satellites() const;

    static constexpr std::size_t kMinSamples = 10;

private:
    std::size_t capacity_;
    std::map<int, std::deque<DopplerSample>> buffers_;
    static const std::deque<DopplerSample> kEmpty;
};

struct DopplerFit {
    int sat_id = 0;
    double rate = 0.0;      // Hz/s
    double intercept = 0.0; // Hz at t = 0
    double sigma = 0.0;     // Hz, residual std (floored at 1 Hz)
    double window_end = 0.0;
};

struct DstConfig {
    double min_band_hz = 20.0;     // delta-f floor
    double k_sigma = 4.0;
    double band_growth_hz_per_s = 1.2; // widens with extrapolation length
    double horizon_s = 300.0;
    int m_of_n = 1; // satellites out of band needed to fail
};

/// Least-squares line through the buffered samples of one satellite.
/// Throws NumericError with fewer than kMinSamples samples.
DopplerFit dst_fit(const DopplerHistory& history, int sat_id);

struct DopplerPrediction {
    double shift = 0.0; // Hz
    double band = 0.0;  // Hz
};

/// Linear extrapolation with a band that grows with extrapolation length.
/// Throws NumericError past the prediction horizon.
DopplerPrediction dst_predict(const DopplerFit& fit, double t, const DstConfig& cfg = {});

struct DstTestResult {
    TestOutcome outcome = TestOutcome::Inconclusive;
    int n_checked = 0;
    int n_out_of_band = 0;
    double max_discrepancy = 0.0; // Hz
    std::map<int, double> discrepancies;
};

/// Compare measured shifts against per-satellite predictions.
DstTestResult dst_test(const std::map<int, DopplerPrediction>& predicted,
                       const std::map<int, double>& measured, const DstConfig& cfg = {});

} // namespace gnss
