#include "gnsssim/scenario.hpp"

#include "gnsssim/constants.hpp"
#include "gnsssim/errors.hpp"
#include "gnsssim/rinex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace gnss {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Local ENU basis at a ground point.
struct EnuFrame {
    Vec3 origin, east, north, up;

    static EnuFrame at(double lat_deg, double lon_deg, double height_m) {
        EnuFrame f;
        f.origin = geodetic_to_ecef(lat_deg * kDeg, lon_deg * kDeg, height_m);
        f.up = f.origin.normalized();
        f.east = Vec3::UnitZ().cross(f.up).normalized();
        f.north = f.up.cross(f.east);
        return f;
    }
};

} // namespace

ReceiverState trajectory_state(const TrajectorySpec& traj, double t) {
    ReceiverState rx;
    rx.t = t;
    switch (traj.kind) {
    case TrajectorySpec::Kind::Static: {
        rx.pos = geodetic_to_ecef(traj.lat_deg * kDeg, traj.lon_deg * kDeg, traj.height_m);
        break;
    }
    case TrajectorySpec::Kind::Circular: {
        const EnuFrame f = EnuFrame::at(traj.lat_deg, traj.lon_deg, traj.height_m);
        const double w = traj.radius_m > 0.0 ? traj.speed_mps / traj.radius_m : 0.0;
        const double a = w * t;
        rx.pos = f.origin + traj.radius_m * (std::cos(a) * f.east + std::sin(a) * f.north);
        rx.vel = traj.speed_mps * (-std::sin(a) * f.east + std::cos(a) * f.north);
        break;
    }
    case TrajectorySpec::Kind::Waypoints: {
        std::vector<Vec3> pts;
        pts.reserve(traj.waypoints.size());
        for (const auto& w : traj.waypoints) {
            pts.push_back(geodetic_to_ecef(w.lat_deg * kDeg, w.lon_deg * kDeg, w.height_m));
        }
        double remaining = t;
        rx.pos = pts.front();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double speed = std::max(traj.waypoints[i].speed_mps, 0.1);
            const double leg = (pts[i + 1] - pts[i]).norm();
            const double leg_time = leg / speed;
            if (remaining < leg_time) {
                const Vec3 dir = (pts[i + 1] - pts[i]) / leg;
                rx.pos = pts[i] + speed * remaining * dir;
                rx.vel = speed * dir;
                return rx;
            }
            remaining -= leg_time;
            rx.pos = pts[i + 1];
        }
        rx.vel = Vec3::Zero(); // parked at the final waypoint
        break;
    }
    }
    return rx;
}

ObservationEpoch generate_measurements(const ScenarioConfig& cfg,
                                       const std::vector<SatelliteEphemeris>& constellation,
                                       double t, const ReceiverState& truth, double clock_offset,
                                       std::mt19937_64& rng) {
    ObservationEpoch epoch;
    epoch.t = t;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& eph : constellation) {
        const SatState sat = sat_state(eph, t);
        if (!visible(sat, truth, cfg.elevation_mask_deg)) continue;
        SatObservation obs;
        obs.pseudorange = predict_pseudorange(sat.pos, truth.pos, clock_offset) +
                          cfg.sigma_pseudorange_m * gauss(rng);
        obs.doppler = doppler_shift(sat, truth, kGpsL1Frequency) +
                      cfg.sigma_doppler_hz * gauss(rng);
        obs.available = true;
        epoch.sats[eph.sat_id] = obs;
    }
    return epoch;
}

namespace {

std::vector<SatelliteEphemeris> resolve_constellation(const ScenarioConfig& cfg) {
    if (cfg.constellation.source == ConstellationSpec::Source::RinexNav) {
        std::ifstream in(cfg.constellation.nav_path);
        if (!in) throw ConfigError("cannot open nav file: " + cfg.constellation.nav_path);
        const RinexNavFile nav = parse_nav(in);
        // One record per satellite: keep the first occurrence.
        std::vector<SatelliteEphemeris> out;
        for (const auto& rec : nav.records) {
            const bool seen = std::any_of(out.begin(), out.end(),
                                          [&](const auto& e) { return e.sat_id == rec.sat_id; });
            if (!seen) out.push_back(rec);
        }
        if (out.size() < 4) throw ConfigError("nav file holds fewer than 4 satellites");
        return out;
    }
    SynthOptions opt;
    opt.ref_lat_deg = cfg.trajectory.lat_deg;
    opt.ref_lon_deg = cfg.trajectory.lon_deg;
    opt.window_s = std::max(3600.0, cfg.duration_s);
    opt.mask_deg = cfg.elevation_mask_deg;
    return synth_constellation(cfg.constellation.n_sats, cfg.constellation.seed, opt);
}

int mode_code(Mode m) {
    return m == Mode::Normal ? 0 : m == Mode::Alert ? 1 : 2;
}

double verdict_code(const std::optional<TestOutcome>& v) {
    if (!v) return -1.0;
    switch (*v) {
    case TestOutcome::Fail: return 0.0;
    case TestOutcome::Pass: return 1.0;
    case TestOutcome::Inconclusive: return 2.0;
    }
    return -1.0;
}

} // namespace

RunMetrics run(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto constellation = resolve_constellation(cfg);
    for (int sat : cfg.attack.affected_sats) {
        const bool known = std::any_of(constellation.begin(), constellation.end(),
                                       [&](const auto& e) { return e.sat_id == sat; });
        if (!known) {
            throw ConfigError("attack references unknown satellite " + std::to_string(sat));
        }
    }

    std::mt19937_64 meas_rng(cfg.master_seed ^ 0x9e3779b97f4a7c15ull);
    std::mt19937_64 imu_rng(cfg.master_seed ^ 0xc2b2ae3d27d4eb4full);
    std::mt19937_64 init_rng(cfg.master_seed ^ 0x165667b19e3779f9ull);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // True receiver clock behaviour.
    double drift_rate = cfg.clock_drift_rate;
    if (cfg.sample_clock_drift) {
        const double sigma = cfg.clock_class == ClockClass::QuartzStable ? 8e-10 : 3e-5;
        drift_rate = sigma * gauss(init_rng);
    }
    double clock_err = 0.0; // receiver clock minus true GPS time, s

    const double onset = cfg.attack.replay ? cfg.attack.spoof_onset(cfg.step_s) : -1.0;
    const bool attack_present = cfg.attack.replay || cfg.attack.jamming;

    // Detector state.
    ModeState mode;
    ClockModel cm;
    cm.device_class = cfg.clock_class;
    DopplerHistory history(50);
    KalmanState ks;
    bool kalman_init = false;
    Vec3 last_fix = Vec3::Zero();
    double last_fix_t = 0.0;
    bool have_fix = false;
    double drift_est = 0.0;
    double last_resync_t = 0.0;
    double last_resync_offset = 0.0;
    bool have_resync = false;

    // Class 2 adversary: victim-state assumption frozen at spoof onset.
    ReceiverState frozen_assumed;
    bool frozen_set = false;

    RunMetrics metrics;
    metrics.config_hash = config_hash(cfg);
    metrics.master_seed = cfg.master_seed;
    metrics.summary.attack_present = attack_present;

    const int n_epochs = static_cast<int>(std::floor(cfg.duration_s / cfg.step_s)) + 1;
    const double sigma_fix = std::max(1.0, 2.0 * cfg.sigma_pseudorange_m);

    for (int k = 0; k < n_epochs; ++k) {
        const double t = k * cfg.step_s;
        if (k > 0) clock_err += drift_rate * cfg.step_s;

        const ReceiverState truth = trajectory_state(cfg.trajectory, t);

        EpochRecord rec;
        rec.t = t;
        rec.true_pos = truth.pos;
        rec.clock_error = clock_err;
        rec.mode = mode.mode;

        const bool jammed =
            cfg.attack.jamming && t >= cfg.attack.jam_start && t <= cfg.attack.jam_end;
        const bool spoofed = cfg.attack.replay && t >= onset;

        ObservationEpoch epoch;
        if (!jammed) {
            epoch = generate_measurements(cfg, constellation, t, truth, clock_err, meas_rng);
        } else {
            epoch.t = t;
        }
        rec.n_visible = static_cast<int>(epoch.sats.size());

        std::map<int, SatState> sat_states;
        for (const auto& eph : constellation) sat_states.emplace(eph.sat_id, sat_state(eph, t));

        for (const auto& [sat_id, st] : sat_states) {
            if (epoch.sats.count(sat_id) && epoch.sats[sat_id].doppler) {
                rec.doppler_true[sat_id] = doppler_shift(st, truth, kGpsL1Frequency);
            }
        }

        if (spoofed) {
            // Replay delay relative to the victim's re-synchronized timeline:
            // each resync interval the replayed stream falls another t_replay
            // behind, which is what makes the offset accumulate.
            const int resyncs_since =
                static_cast<int>(std::floor((t - onset) / cfg.resync_period_s));
            const double accumulation = 1.0 + resyncs_since;

            ReceiverState assumed = truth;
            assumed.pos += cfg.attack.freq_policy.assumed_pos_error;
            assumed.vel += cfg.attack.freq_policy.assumed_vel_error;
            if (cfg.attack.adversary_class == AdversaryClass::AdaptiveFrequency) {
                if (!frozen_set) {
                    frozen_assumed = assumed;
                    frozen_set = true;
                }
                assumed = frozen_assumed;
            }

            for (auto& [sat_id, obs] : epoch.sats) {
                if (!cfg.attack.affects(sat_id)) continue;
                const double delay = cfg.attack.replay_delay(sat_id) * accumulation;
                if (obs.pseudorange) *obs.pseudorange += kSpeedOfLight * delay;
                obs.phase.reset();
                if (obs.doppler) {
                    obs.doppler = adversary_doppler(cfg.attack.adversary_class,
                                                    cfg.attack.freq_policy,
                                                    sat_states.at(sat_id), assumed,
                                                    kGpsL1Frequency) +
                                  cfg.sigma_doppler_hz * gauss(meas_rng);
                }
            }
        }

        // --- receiver: snapshot PVT ---
        PseudorangeSet prs;
        prs.t = t;
        std::map<int, double> measured_doppler;
        for (const auto& [sat_id, obs] : epoch.sats) {
            if (!obs.available || !obs.pseudorange) continue;
            PseudorangeEntry e;
            e.sat_id = sat_id;
            const SatState& st = sat_states.at(sat_id);
            e.sat_pos = st.pos;
            e.sat_vel = st.vel;
            e.pseudorange = *obs.pseudorange;
            if (obs.doppler) {
                e.has_doppler = true;
                e.doppler = *obs.doppler;
                measured_doppler[sat_id] = *obs.doppler;
            }
            prs.entries.push_back(e);
        }

        rec.doppler_measured = measured_doppler;

        std::optional<PvtSolution> solved;
        if (prs.entries.size() >= 4) {
            try {
                PvtSolution s = solve_pvt(prs, have_fix ? last_fix : Vec3::Zero());
                if (s.converged) solved = std::move(s);
            } catch (const GeometryError&) {
                // treated as loss of lock for this epoch
            }
        }

        EpochStatus status;
        status.locked = solved.has_value();
        status.n_sats = static_cast<int>(prs.entries.size());
        if (solved && have_fix && mode.mode == Mode::Normal) {
            const double allowed = cfg.detectors.suspicion_jump_m +
                                   (cfg.trajectory.speed_mps + 50.0) * (t - last_fix_t);
            status.suspicious = (solved->pos - last_fix).norm() > allowed;
        }

        // --- detector tests (only meaningful outside Normal) ---
        std::optional<TestResults> tests;
        if (mode.mode != Mode::Normal && solved) {
            TestResults tr;
            const double gap = have_fix ? t - last_fix_t : t;

            if (cfg.detectors.location_enabled) {
                InertialPrediction pred;
                if (cfg.detectors.use_kalman && kalman_init) {
                    pred.pos = ks.pos();
                    pred.uncertainty = ks.uncertainty();
                } else {
                    pred = inertial_predict(truth, cfg.imu, gap, imu_rng);
                }
                const auto lr = location_test(pred, *solved, cfg.detectors.location_k_sigma);
                tr.location = lr.pass ? TestOutcome::Pass : TestOutcome::Fail;
            }

            if (cfg.detectors.clock_enabled && have_resync) {
                const auto cr = clock_test(cm, solved->clock_offset, t);
                tr.clock = cr.pass ? TestOutcome::Pass : TestOutcome::Fail;
            }

            if (cfg.detectors.dst_enabled) {
                std::map<int, DopplerPrediction> preds;
                for (int sat : history.satellites()) {
                    try {
                        const DopplerFit fit = dst_fit(history, sat);
                        preds[sat] = dst_predict(fit, t, cfg.detectors.dst);
                        rec.doppler_predicted[sat] = preds[sat].shift;
                    } catch (const NumericError&) {
                        // insufficient samples or stale horizon: skip satellite
                    }
                }
                const DstTestResult dr = dst_test(preds, measured_doppler, cfg.detectors.dst);
                tr.doppler = dr.outcome;
                rec.max_dst_discrepancy = dr.max_discrepancy;
            }
            tests = tr;
        }

        const Mode prev_mode = mode.mode;
        mode = mode_step(mode, status, tests, t, solved, cfg.detectors.quarantine_epochs);
        rec.mode = mode.mode;
        if (tests) {
            rec.location_verdict = tests->location;
            rec.clock_verdict = tests->clock;
            rec.dst_verdict = tests->doppler;
        }

        if (prev_mode != Mode::UnderAttack && mode.mode == Mode::UnderAttack) {
            if (attack_present && cfg.attack.replay && t >= onset) {
                if (metrics.summary.detection_latency_s < 0.0) {
                    metrics.summary.detection_latency_s = t - onset;
                }
            } else {
                ++metrics.summary.false_alarms;
            }
        }

        // --- normal-mode bookkeeping & clock steering ---
        const bool accept_now =
            mode.mode == Mode::Normal && solved &&
            (prev_mode == Mode::Normal || !mode.accepted.empty());
        if (accept_now) {
            last_fix = solved->pos;
            last_fix_t = t;
            have_fix = true;

            for (const auto& [sat, d] : measured_doppler) history.push(sat, t, d);

            if (!kalman_init) {
                ks.x.head<3>() = solved->pos;
                ks.x.tail<3>() = solved->has_velocity ? solved->vel : Vec3::Zero();
                ks.P = Eigen::Matrix<double, 6, 6>::Identity() * 100.0;
                kalman_init = true;
            } else {
                ks = kalman_predict(ks, cfg.step_s);
                ks = kalman_update(ks, solved->pos,
                                   sigma_fix * sigma_fix * Eigen::Matrix3d::Identity(), true);
                if (solved->has_velocity) ks.x.tail<3>() = solved->vel;
            }

            const bool resync_due =
                !have_resync || t - last_resync_t >= cfg.resync_period_s - 1e-9 ||
                prev_mode != Mode::Normal;
            if (resync_due) {
                if (have_resync) {
                    const double interval = t - last_resync_t;
                    if (interval > 0.0) {
                        const double est = (solved->clock_offset - last_resync_offset) / interval;
                        drift_est = have_resync ? 0.7 * drift_est + 0.3 * est : est;
                    }
                }
                clock_err -= solved->clock_offset; // steer clock to solved time
                last_resync_t = t;
                last_resync_offset = 0.0;
                have_resync = true;
                cm.last_sync_time = t;
                cm.last_offset = 0.0;
                cm.drift_rate = drift_est;
                rec.clock_error = clock_err;
            }
        } else if (kalman_init && k > 0) {
            ks = kalman_predict(ks, cfg.step_s); // GNSS-unavailable holdover
        }

        if (solved) {
            rec.solved_pos = solved->pos;
            rec.solved_offset = solved->clock_offset;
            rec.loc_offset = (solved->pos - truth.pos).norm();
            rec.locked = true;
        }
        rec.kalman_uncertainty = kalman_init ? ks.uncertainty() : 0.0;
        metrics.epochs.push_back(std::move(rec));
    }

    // Summary.
    for (const auto& e : metrics.epochs) {
        metrics.summary.max_loc_offset_m = std::max(metrics.summary.max_loc_offset_m, e.loc_offset);
        metrics.summary.max_time_offset_s =
            std::max(metrics.summary.max_time_offset_s, std::abs(e.clock_error));
        if (e.mode == Mode::Normal) ++metrics.summary.epochs_normal;
        else if (e.mode == Mode::Alert) ++metrics.summary.epochs_alert;
        else ++metrics.summary.epochs_under_attack;
    }
    metrics.summary.missed_detection =
        cfg.attack.replay && metrics.summary.detection_latency_s < 0.0;
    return metrics;
}

SeriesCollection RunMetrics::to_series() const {
    SeriesCollection s;
    std::vector<double> loc, clk, solved_off, mode_c, nvis, locked, lverd, cverd, dverd, kunc,
        dstdisc;
    for (const auto& e : epochs) {
        s.t.push_back(e.t);
        loc.push_back(e.loc_offset);
        clk.push_back(e.clock_error);
        solved_off.push_back(e.solved_offset.value_or(0.0));
        mode_c.push_back(mode_code(e.mode));
        nvis.push_back(e.n_visible);
        locked.push_back(e.locked ? 1.0 : 0.0);
        lverd.push_back(verdict_code(e.location_verdict));
        cverd.push_back(verdict_code(e.clock_verdict));
        dverd.push_back(verdict_code(e.dst_verdict));
        kunc.push_back(e.kalman_uncertainty);
        dstdisc.push_back(e.max_dst_discrepancy);
    }
    s.add("loc_offset_m", loc);
    s.add("clock_error_s", clk);
    s.add("solved_offset_s", solved_off);
    s.add("mode", mode_c);
    s.add("n_visible", nvis);
    s.add("locked", locked);
    s.add("location_verdict", lverd);
    s.add("clock_verdict", cverd);
    s.add("dst_verdict", dverd);
    s.add("kalman_uncertainty_m", kunc);
    s.add("max_dst_discrepancy_hz", dstdisc);
    return s;
}

RunSummary RunMetrics::recompute_summary(const ScenarioConfig& cfg) const {
    RunSummary s;
    s.attack_present = cfg.attack.replay || cfg.attack.jamming;
    const double onset = cfg.attack.replay ? cfg.attack.spoof_onset(cfg.step_s) : -1.0;
    Mode prev = Mode::Normal;
    for (const auto& e : epochs) {
        s.max_loc_offset_m = std::max(s.max_loc_offset_m, e.loc_offset);
        s.max_time_offset_s = std::max(s.max_time_offset_s, std::abs(e.clock_error));
        if (e.mode == Mode::Normal) ++s.epochs_normal;
        else if (e.mode == Mode::Alert) ++s.epochs_alert;
        else ++s.epochs_under_attack;
        if (prev != Mode::UnderAttack && e.mode == Mode::UnderAttack) {
            if (cfg.attack.replay && e.t >= onset) {
                if (s.detection_latency_s < 0.0) s.detection_latency_s = e.t - onset;
            } else {
                ++s.false_alarms;
            }
        }
        prev = e.mode;
    }
    s.missed_detection = cfg.attack.replay && s.detection_latency_s < 0.0;
    return s;
}

// ---------------------------------------------------------------------------
// Figure replication presets
// ---------------------------------------------------------------------------

std::vector<std::string> figure_names() {
    return {"fig2a", "fig2b", "fig5", "fig6", "fig8", "fig9"};
}

FigureResult replicate_figure(const std::string& name, ScenarioConfig cfg) {
    FigureResult out;

    if (name == "fig2a") {
        // Location offset under a selective replay, growing per resync.
        cfg.attack.replay = true;
        cfg.attack.jamming = false;
        cfg.attack.t_min_replay = 1e-6;
        cfg.attack.affect_all = false;
        cfg.attack.affected_sats = {1, 2};
        cfg.attack.per_sat_extra = {{2, 1e-6}};
        cfg.detectors.location_enabled = false;
        cfg.detectors.clock_enabled = false;
        cfg.detectors.dst_enabled = false;
        cfg.detectors.suspicion_jump_m = 1e12;
        cfg.clock_drift_rate = 0.0;
        cfg.sample_clock_drift = false;
        out.metrics = run(cfg);
        SeriesCollection s;
        for (const auto& e : out.metrics.epochs) {
            s.t.push_back(e.t);
        }
        std::vector<double> off;
        for (const auto& e : out.metrics.epochs) off.push_back(e.loc_offset);
        s.add("loc_offset_m", off);
        out.series["loc_offset"] = s;
    } else if (name == "fig2b") {
        // Time-offset staircase: uniform 20 ms replay, resync every 30 s.
        cfg.attack.replay = true;
        cfg.attack.jamming = false;
        cfg.attack.t_min_replay = 0.020;
        cfg.attack.affect_all = true;
        cfg.attack.affected_sats.clear();
        cfg.detectors.location_enabled = false;
        cfg.detectors.clock_enabled = false;
        cfg.detectors.dst_enabled = false;
        cfg.detectors.suspicion_jump_m = 1e12;
        cfg.clock_drift_rate = 0.0;
        cfg.sample_clock_drift = false;
        out.metrics = run(cfg);
        SeriesCollection s;
        std::vector<double> off;
        for (const auto& e : out.metrics.epochs) {
            s.t.push_back(e.t);
            off.push_back(std::abs(e.clock_error));
        }
        s.add("time_offset_s", off);
        out.series["time_offset"] = s;
    } else if (name == "fig5") {
        // Dead-reckoning uncertainty growth across a long outage.
        cfg.attack.jamming = true;
        cfg.attack.replay = false;
        cfg.attack.jam_start = 30.0;
        cfg.attack.jam_end = cfg.duration_s - 10.0;
        out.metrics = run(cfg);
        SeriesCollection s;
        std::vector<double> kal, raw;
        for (const auto& e : out.metrics.epochs) {
            s.t.push_back(e.t);
            kal.push_back(e.kalman_uncertainty);
            const double gap = e.t > cfg.attack.jam_start ? e.t - cfg.attack.jam_start : 0.0;
            raw.push_back(cfg.imu.error(gap));
        }
        s.add("kalman_uncertainty_m", kal);
        s.add("raw_imu_error_m", raw);
        out.series["uncertainty"] = s;
    } else if (name == "fig6") {
        // Doppler series with linear fit and residuals for one satellite.
        cfg.attack.replay = false;
        cfg.attack.jamming = false;
        out.metrics = run(cfg);
        // Most-observed satellite.
        std::map<int, int> counts;
        for (const auto& e : out.metrics.epochs) {
            for (const auto& [sat, d] : e.doppler_true) {
                (void)d;
                ++counts[sat];
            }
        }
        int best = -1, best_n = 0;
        for (const auto& [sat, n] : counts) {
            if (n > best_n) {
                best = sat;
                best_n = n;
            }
        }
        DopplerHistory hist(50);
        SeriesCollection s;
        std::vector<double> meas, fitv, resid;
        DopplerFit fit;
        bool have_fit = false;
        for (const auto& e : out.metrics.epochs) {
            const auto it = e.doppler_measured.find(best);
            const auto it2 = e.doppler_true.find(best);
            if (it == e.doppler_measured.end() && it2 == e.doppler_true.end()) continue;
            const double d = it != e.doppler_measured.end() ? it->second : it2->second;
            hist.push(best, e.t, d);
            if (!have_fit && hist.samples(best).size() >= 50) {
                fit = dst_fit(hist, best);
                have_fit = true;
            }
            s.t.push_back(e.t);
            meas.push_back(d);
        }
        if (!have_fit && hist.samples(best).size() >= DopplerHistory::kMinSamples) {
            fit = dst_fit(hist, best);
            have_fit = true;
        }
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            const double f = have_fit ? fit.intercept + fit.rate * s.t[i] : 0.0;
            fitv.push_back(f);
            resid.push_back(meas[i] - f);
        }
        s.add("doppler_hz", meas);
        s.add("linear_fit_hz", fitv);
        s.add("residual_hz", resid);
        out.series["doppler_fit"] = s;
    } else if (name == "fig8" || name == "fig9") {
        cfg.attack.jamming = true;
        cfg.attack.jam_start = 60.0;
        cfg.attack.jam_end = 100.0;
        cfg.attack.replay = true;
        cfg.attack.affect_all = true;
        cfg.detectors.dst_enabled = true;
        if (name == "fig8") {
            cfg.attack.adversary_class = AdversaryClass::ConstantFrequency;
            cfg.attack.freq_policy.constant_offset_hz = 0.0;
        } else {
            cfg.attack.adversary_class = AdversaryClass::Coordinated;
            if (cfg.attack.freq_policy.assumed_vel_error.isZero()) {
                // Calibrated so the best prediction still misses by ~300 Hz.
                cfg.attack.freq_policy.assumed_vel_error = Vec3{40.0, 40.0, 30.0};
            }
        }
        out.metrics = run(cfg);
        SeriesCollection s;
        std::vector<double> disc;
        for (const auto& e : out.metrics.epochs) {
            s.t.push_back(e.t);
            disc.push_back(e.max_dst_discrepancy);
        }
        s.add("max_dst_discrepancy_hz", disc);
        out.series["dst_discrepancy"] = s;
    } else {
        std::string names;
        for (const auto& n : figure_names()) names += (names.empty() ? "" : ", ") + n;
        throw ConfigError("unknown figure '" + name + "'; available: " + names);
    }
    return out;
}

} // namespace gnss
