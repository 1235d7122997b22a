#pragma once

#include "gnsssim/rinex.hpp"

#include <map>
#include <vector>

namespace gnss {

enum class AdversaryClass {
    ConstantFrequency = 1, // fixed transmit frequency, no Doppler shaping
    AdaptiveFrequency = 2, // predicts victim Doppler, assumption frozen at onset
    Coordinated = 3,       // predicts victim Doppler, assumption refreshed per epoch
};

struct AdversaryFreqPolicy {
    // Class 1: constant transmit-frequency offset from nominal; a static
    // ground transmitter produces no satellite-like Doppler, so the victim
    // observes just this offset.
    double constant_offset_hz = 0.0;
    // Classes 2/3: the adversary's error about the victim's state.
    Vec3 assumed_pos_error = Vec3::Zero();  // m
    Vec3 assumed_vel_error = Vec3::Zero();  // m/s
};

struct AttackScenario {
    double jam_start = 0.0;
    double jam_end = 0.0; // closed interval [jam_start, jam_end]
    bool jamming = false;

    bool replay = false;
    double t_min_replay = 0.020;          // s, floor imposed by the attack setup
    double replay_extra = 0.0;            // adversary-chosen tau >= 0
    std::map<int, double> per_sat_extra;  // optional per-satellite tau override
    bool affect_all = true;               // whole constellation by default
    std::vector<int> affected_sats;       // subset mode; empty subset = no-op
    AdversaryClass adversary_class = AdversaryClass::ConstantFrequency;
    AdversaryFreqPolicy freq_policy;

    double replay_delay(int sat_id) const {
        const auto it = per_sat_extra.find(sat_id);
        return t_min_replay + (it != per_sat_extra.end() ? it->second : replay_extra);
    }
    bool affects(int sat_id) const {
        if (affect_all) return true;
        for (int s : affected_sats) {
            if (s == sat_id) return true;
        }
        return false;
    }
    /// Spoofing starts one epoch after lock is lost.
    double spoof_onset(double step) const { return jamming ? jam_end + step : jam_start; }

    void validate() const;
};

/// Flag every observation inside the closed window unavailable.
std::vector<ObservationEpoch> apply_jamming(const std::vector<ObservationEpoch>& series,
                                            double window_start, double window_end);

/// Doppler shift the victim observes from the adversary's transmission.
double adversary_doppler(AdversaryClass cls, const AdversaryFreqPolicy& policy,
                         const SatState& sat, const ReceiverState& assumed_rx, double f_t);

/// Replace observations of affected satellites from spoof onset onward:
/// pseudoranges delayed by c * t_replay, Doppler per the adversary's frequency
/// policy, carrier phase invalidated. truth[i] must be the victim state at
/// series[i].t.
std::vector<ObservationEpoch> apply_replay(const std::vector<ObservationEpoch>& series,
                                           const AttackScenario& scenario,
                                           const std::vector<ReceiverState>& truth,
                                           const std::vector<SatelliteEphemeris>& constellation,
                                           double step, double f_t = 1.575e9);

} // namespace gnss
