#pragma once

#include "gnsssim/config.hpp"
#include "gnsssim/series.hpp"

#include <optional>

namespace gnss {

struct EpochRecord {
    double t = 0.0;
    Vec3 true_pos = Vec3::Zero();
    std::optional<Vec3> solved_pos;
    double loc_offset = 0.0;       // m, 0 when unsolved
    double clock_error = 0.0;      // s, receiver clock vs true time
    std::optional<double> solved_offset; // s, solved t_V
    Mode mode = Mode::Normal;
    int n_visible = 0;
    bool locked = false;
    std::optional<TestOutcome> location_verdict;
    std::optional<TestOutcome> clock_verdict;
    std::optional<TestOutcome> dst_verdict;
    double kalman_uncertainty = 0.0; // m
    double max_dst_discrepancy = 0.0; // Hz
    std::map<int, double> doppler_true;
    std::map<int, double> doppler_measured;
    std::map<int, double> doppler_predicted;
};

struct RunSummary {
    double detection_latency_s = -1.0; // -1 = not detected
    int false_alarms = 0;
    bool attack_present = false;
    bool missed_detection = false;
    double max_loc_offset_m = 0.0;
    double max_time_offset_s = 0.0;
    int epochs_normal = 0;
    int epochs_alert = 0;
    int epochs_under_attack = 0;
};

struct RunMetrics {
    std::vector<EpochRecord> epochs;
    RunSummary summary;
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;

    SeriesCollection to_series() const;
    /// Recompute the summary from the epoch series (consistency check).
    RunSummary recompute_summary(const ScenarioConfig& cfg) const;
};

/// Receiver position at time t along the configured trajectory.
ReceiverState trajectory_state(const TrajectorySpec& traj, double t);

/// Forward-model one epoch of observations for the visible constellation.
/// clock_offset is the receiver clock offset against true GPS time.
ObservationEpoch generate_measurements(const ScenarioConfig& cfg,
                                       const std::vector<SatelliteEphemeris>& constellation,
                                       double t, const ReceiverState& truth, double clock_offset,
                                       std::mt19937_64& rng);

/// Run one end-to-end scenario: truth propagation, measurement generation,
/// attack transformation, receiver clock resync, detector protocol, metrics.
/// Deterministic under cfg.master_seed.
RunMetrics run(const ScenarioConfig& cfg);

/// Configure and run one of the named reference experiments; returns the metrics
/// plus named series for redrawing the figure.
struct FigureResult {
    RunMetrics metrics;
    std::map<std::string, SeriesCollection> series;
};
FigureResult replicate_figure(const std::string& name, ScenarioConfig overrides = {});

/// Names accepted by replicate_figure.
std::vector<std::string> figure_names();

} // namespace gnss
