#pragma once

#include "gnsssim/attack.hpp"
#include "gnsssim/detectors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gnss {

struct Waypoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double height_m = 0.0;
    double speed_mps = 0.0; // speed toward the next waypoint
};

struct TrajectorySpec {
    enum class Kind { Static, Circular, Waypoints } kind = Kind::Static;
    // Static / circular reference point.
    double lat_deg = 45.0;
    double lon_deg = 0.0;
    double height_m = 100.0;
    // Circular path.
    double radius_m = 500.0;
    double speed_mps = 10.0;
    // Waypoint polyline.
    std::vector<Waypoint> waypoints;
};

struct ConstellationSpec {
    enum class Source { Synthetic, RinexNav } source = Source::Synthetic;
    int n_sats = 10;
    std::uint64_t seed = 1;
    std::string nav_path;
};

struct DetectorSpec {
    bool location_enabled = true;
    bool clock_enabled = true;
    bool dst_enabled = true;
    double location_k_sigma = 3.0;
    bool use_kalman = true; // Kalman-filtered vs raw-IMU location prediction
    DstConfig dst;
    int quarantine_epochs = 10;
    double suspicion_jump_m = 300.0; // position discontinuity Alert trigger
};

struct ScenarioConfig {
    double duration_s = 300.0;
    double step_s = 1.0;
    TrajectorySpec trajectory;
    ConstellationSpec constellation;
    ClockClass clock_class = ClockClass::QuartzCommodity;
    double clock_drift_rate = 0.0;  // s/s; 0 = sample from device class
    bool sample_clock_drift = true;
    ImuErrorModel imu = ImuErrorModel::crista_like();
    double sigma_pseudorange_m = 5.0;
    double sigma_doppler_hz = 5.0;
    double resync_period_s = 30.0;
    double elevation_mask_deg = 10.0;
    AttackScenario attack;
    DetectorSpec detectors;
    std::uint64_t master_seed = 1;
    std::string output_dir;

    void validate() const;
};

/// Parse a JSON scenario config. Unknown keys are rejected with a field-level
/// message; all fields are optional and default as above.
ScenarioConfig load_config(const std::string& json_text);
ScenarioConfig load_config_file(const std::string& path);

/// Canonical serialization (used for the run manifest and config hashing).
std::string dump_config(const ScenarioConfig& cfg);

/// Stable FNV-1a hash of the canonical serialization.
std::uint64_t config_hash(const ScenarioConfig& cfg);

/// Set one scalar parameter by dotted path (sweep support), e.g.
/// "attack.replay_extra" or "detectors.dst.min_band_hz".
void set_config_param(ScenarioConfig& cfg, const std::string& path, double value);

} // namespace gnss
