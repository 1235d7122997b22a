#include "gnsssim/attack.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gnss {

void AttackScenario::validate() const {
    if (jamming && jam_end < jam_start) {
        throw ConfigError("inverted jamming window");
    }
    if (replay) {
        if (t_min_replay <= 0.0) throw ConfigError("t_min_replay must be positive");
        if (replay_extra < 0.0) throw ConfigError("replay tau must be >= 0");
        for (const auto& [sat, tau] : per_sat_extra) {
            if (tau < 0.0) {
                throw ConfigError("replay tau must be >= 0 (satellite " + std::to_string(sat) +
                                  ")");
            }
        }
        const int c = static_cast<int>(adversary_class);
        if (c < 1 || c > 3) throw ConfigError("adversary class must be 1, 2 or 3");
    }
}

std::vector<ObservationEpoch> apply_jamming(const std::vector<ObservationEpoch>& series,
                                            double window_start, double window_end) {
    if (window_end < window_start) throw ConfigError("inverted jamming window");
    std::vector<ObservationEpoch> out = series;
    for (auto& epoch : out) {
        if (epoch.t < window_start || epoch.t > window_end) continue;
        for (auto& [sat, obs] : epoch.sats) {
            (void)sat;
            obs.available = false;
            obs.pseudorange.reset();
            obs.doppler.reset();
            obs.phase.reset();
        }
    }
    return out;
}

double adversary_doppler(AdversaryClass cls, const AdversaryFreqPolicy& policy,
                         const SatState& sat, const ReceiverState& assumed_rx, double f_t) {
    if (cls == AdversaryClass::ConstantFrequency) {
        return policy.constant_offset_hz;
    }
    return doppler_shift(sat, assumed_rx, f_t);
}

std::vector<ObservationEpoch> apply_replay(const std::vector<ObservationEpoch>& series,
                                           const AttackScenario& scenario,
                                           const std::vector<ReceiverState>& truth,
                                           const std::vector<SatelliteEphemeris>& constellation,
                                           double step, double f_t) {
    scenario.validate();
    if (truth.size() != series.size()) {
        throw ConfigError("truth trajectory length does not match observation series");
    }
    for (int sat : scenario.affected_sats) {
        const bool known = std::any_of(constellation.begin(), constellation.end(),
                                       [&](const auto& e) { return e.sat_id == sat; });
        if (!known) {
            throw ConfigError("replay schedule references unknown satellite " +
                              std::to_string(sat));
        }
    }
    if (!scenario.replay) return series;

    const double onset = scenario.spoof_onset(step);

    // Class 2 freezes its guess of the victim state at spoof onset.
    ReceiverState frozen;
    bool frozen_set = false;

    std::vector<ObservationEpoch> out = series;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& epoch = out[i];
        if (epoch.t < onset) continue;

        ReceiverState assumed = truth[i];
        assumed.pos += scenario.freq_policy.assumed_pos_error;
        assumed.vel += scenario.freq_policy.assumed_vel_error;
        if (scenario.adversary_class == AdversaryClass::AdaptiveFrequency) {
            if (!frozen_set) {
                frozen = assumed;
                frozen_set = true;
            }
            assumed = frozen;
            assumed.t = epoch.t;
        }

        for (auto& [sat_id, obs] : epoch.sats) {
            if (!scenario.affects(sat_id)) continue;
            const double delay = scenario.replay_delay(sat_id);
            if (obs.pseudorange) *obs.pseudorange += kSpeedOfLight * delay;
            obs.available = obs.pseudorange.has_value();
            obs.phase.reset(); // replayed carrier is not phase-coherent

            const auto eph = std::find_if(constellation.begin(), constellation.end(),
                                          [&](const auto& e) { return e.sat_id == sat_id; });
            if (obs.doppler && eph != constellation.end()) {
                const SatState sat = sat_state(*eph, epoch.t);
                obs.doppler = adversary_doppler(scenario.adversary_class, scenario.freq_policy,
                                                sat, assumed, f_t);
            }
        }
    }
    return out;
}

} // namespace gnss
