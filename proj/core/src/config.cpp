#include "gnsssim/config.hpp"

#include "gnsssim/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace gnss {

using nlohmann::ordered_json;

void ScenarioConfig::validate() const {
    if (step_s <= 0.0) throw ConfigError("step must be > 0");
    if (duration_s < step_s) throw ConfigError("duration must be >= step");
    if (sigma_pseudorange_m < 0.0 || sigma_doppler_hz < 0.0) {
        throw ConfigError("noise sigmas must be >= 0");
    }
    if (resync_period_s <= 0.0) throw ConfigError("resync period must be > 0");
    if (constellation.source == ConstellationSpec::Source::Synthetic &&
        constellation.n_sats < 4) {
        throw ConfigError("constellation.n_sats must be >= 4");
    }
    if (constellation.source == ConstellationSpec::Source::RinexNav &&
        constellation.nav_path.empty()) {
        throw ConfigError("constellation.nav_path required for rinex source");
    }
    if (trajectory.kind == TrajectorySpec::Kind::Waypoints && trajectory.waypoints.size() < 2) {
        throw ConfigError("waypoint trajectory needs at least 2 waypoints");
    }
    attack.validate();
    if (detectors.quarantine_epochs < 1) throw ConfigError("quarantine_epochs must be >= 1");
}

namespace {

void reject_unknown(const ordered_json& obj, const std::vector<std::string>& known,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

double num(const ordered_json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError("'" + where + "' must be a number");
    return j.get<double>();
}

void parse_trajectory(const ordered_json& j, TrajectorySpec& t) {
    reject_unknown(j, {"kind", "lat_deg", "lon_deg", "height_m", "radius_m", "speed_mps",
                       "waypoints"},
                   "trajectory");
    if (j.contains("kind")) {
        const std::string k = j.at("kind").get<std::string>();
        if (k == "static") t.kind = TrajectorySpec::Kind::Static;
        else if (k == "circular") t.kind = TrajectorySpec::Kind::Circular;
        else if (k == "waypoints") t.kind = TrajectorySpec::Kind::Waypoints;
        else throw ConfigError("trajectory.kind must be static|circular|waypoints");
    }
    if (j.contains("lat_deg")) t.lat_deg = num(j.at("lat_deg"), "trajectory.lat_deg");
    if (j.contains("lon_deg")) t.lon_deg = num(j.at("lon_deg"), "trajectory.lon_deg");
    if (j.contains("height_m")) t.height_m = num(j.at("height_m"), "trajectory.height_m");
    if (j.contains("radius_m")) t.radius_m = num(j.at("radius_m"), "trajectory.radius_m");
    if (j.contains("speed_mps")) t.speed_mps = num(j.at("speed_mps"), "trajectory.speed_mps");
    if (j.contains("waypoints")) {
        for (const auto& w : j.at("waypoints")) {
            reject_unknown(w, {"lat_deg", "lon_deg", "height_m", "speed_mps"},
                           "trajectory.waypoints[]");
            Waypoint wp;
            wp.lat_deg = num(w.at("lat_deg"), "waypoint.lat_deg");
            wp.lon_deg = num(w.at("lon_deg"), "waypoint.lon_deg");
            if (w.contains("height_m")) wp.height_m = num(w.at("height_m"), "waypoint.height_m");
            if (w.contains("speed_mps")) wp.speed_mps = num(w.at("speed_mps"), "waypoint.speed_mps");
            t.waypoints.push_back(wp);
        }
    }
}

void parse_attack(const ordered_json& j, AttackScenario& a) {
    reject_unknown(j, {"jamming", "jam_start", "jam_end", "replay", "t_min_replay",
                       "replay_extra", "per_sat_extra", "affect_all", "affected_sats",
                       "adversary_class", "constant_offset_hz", "assumed_pos_error",
                       "assumed_vel_error"},
                   "attack");
    if (j.contains("jamming")) a.jamming = j.at("jamming").get<bool>();
    if (j.contains("jam_start")) a.jam_start = num(j.at("jam_start"), "attack.jam_start");
    if (j.contains("jam_end")) a.jam_end = num(j.at("jam_end"), "attack.jam_end");
    if (j.contains("replay")) a.replay = j.at("replay").get<bool>();
    if (j.contains("t_min_replay")) a.t_min_replay = num(j.at("t_min_replay"), "attack.t_min_replay");
    if (j.contains("replay_extra")) a.replay_extra = num(j.at("replay_extra"), "attack.replay_extra");
    if (j.contains("per_sat_extra")) {
        for (const auto& [sat, tau] : j.at("per_sat_extra").items()) {
            a.per_sat_extra[std::stoi(sat)] = num(tau, "attack.per_sat_extra");
        }
    }
    if (j.contains("affected_sats")) {
        for (const auto& s : j.at("affected_sats")) a.affected_sats.push_back(s.get<int>());
        a.affect_all = false; // listing satellites selects subset mode
    }
    if (j.contains("affect_all")) a.affect_all = j.at("affect_all").get<bool>();
    if (j.contains("adversary_class")) {
        const int c = j.at("adversary_class").get<int>();
        if (c < 1 || c > 3) throw ConfigError("attack.adversary_class must be 1, 2 or 3");
        a.adversary_class = static_cast<AdversaryClass>(c);
    }
    if (j.contains("constant_offset_hz")) {
        a.freq_policy.constant_offset_hz = num(j.at("constant_offset_hz"),
                                               "attack.constant_offset_hz");
    }
    const auto vec3 = [](const ordered_json& arr, const std::string& where) {
        if (!arr.is_array() || arr.size() != 3) {
            throw ConfigError("'" + where + "' must be an array of 3 numbers");
        }
        return Vec3{num(arr[0], where), num(arr[1], where), num(arr[2], where)};
    };
    if (j.contains("assumed_pos_error")) {
        a.freq_policy.assumed_pos_error = vec3(j.at("assumed_pos_error"),
                                               "attack.assumed_pos_error");
    }
    if (j.contains("assumed_vel_error")) {
        a.freq_policy.assumed_vel_error = vec3(j.at("assumed_vel_error"),
                                               "attack.assumed_vel_error");
    }
}

void parse_detectors(const ordered_json& j, DetectorSpec& d) {
    reject_unknown(j, {"location_enabled", "clock_enabled", "dst_enabled", "location_k_sigma",
                       "use_kalman", "quarantine_epochs", "suspicion_jump_m", "dst"},
                   "detectors");
    if (j.contains("location_enabled")) d.location_enabled = j.at("location_enabled").get<bool>();
    if (j.contains("clock_enabled")) d.clock_enabled = j.at("clock_enabled").get<bool>();
    if (j.contains("dst_enabled")) d.dst_enabled = j.at("dst_enabled").get<bool>();
    if (j.contains("location_k_sigma")) {
        d.location_k_sigma = num(j.at("location_k_sigma"), "detectors.location_k_sigma");
    }
    if (j.contains("use_kalman")) d.use_kalman = j.at("use_kalman").get<bool>();
    if (j.contains("quarantine_epochs")) d.quarantine_epochs = j.at("quarantine_epochs").get<int>();
    if (j.contains("suspicion_jump_m")) {
        d.suspicion_jump_m = num(j.at("suspicion_jump_m"), "detectors.suspicion_jump_m");
    }
    if (j.contains("dst")) {
        const auto& js = j.at("dst");
        reject_unknown(js, {"min_band_hz", "k_sigma", "band_growth_hz_per_s", "horizon_s",
                            "m_of_n"},
                       "detectors.dst");
        if (js.contains("min_band_hz")) d.dst.min_band_hz = num(js.at("min_band_hz"), "dst.min_band_hz");
        if (js.contains("k_sigma")) d.dst.k_sigma = num(js.at("k_sigma"), "dst.k_sigma");
        if (js.contains("band_growth_hz_per_s")) {
            d.dst.band_growth_hz_per_s = num(js.at("band_growth_hz_per_s"),
                                             "dst.band_growth_hz_per_s");
        }
        if (js.contains("horizon_s")) d.dst.horizon_s = num(js.at("horizon_s"), "dst.horizon_s");
        if (js.contains("m_of_n")) d.dst.m_of_n = js.at("m_of_n").get<int>();
    }
}

} // namespace

ScenarioConfig load_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    reject_unknown(j, {"duration_s", "step_s", "trajectory", "constellation", "clock_class",
                       "clock_drift_rate", "sample_clock_drift", "imu", "sigma_pseudorange_m",
                       "sigma_doppler_hz",
                       "resync_period_s", "elevation_mask_deg", "attack", "detectors",
                       "master_seed", "output_dir"},
                   "");

    ScenarioConfig cfg;
    try {
        if (j.contains("duration_s")) cfg.duration_s = num(j.at("duration_s"), "duration_s");
        if (j.contains("step_s")) cfg.step_s = num(j.at("step_s"), "step_s");
        if (j.contains("trajectory")) parse_trajectory(j.at("trajectory"), cfg.trajectory);
        if (j.contains("constellation")) {
            const auto& jc = j.at("constellation");
            reject_unknown(jc, {"source", "n_sats", "seed", "nav_path"}, "constellation");
            if (jc.contains("source")) {
                const std::string s = jc.at("source").get<std::string>();
                if (s == "synthetic") cfg.constellation.source = ConstellationSpec::Source::Synthetic;
                else if (s == "rinex") cfg.constellation.source = ConstellationSpec::Source::RinexNav;
                else throw ConfigError("constellation.source must be synthetic|rinex");
            }
            if (jc.contains("n_sats")) cfg.constellation.n_sats = jc.at("n_sats").get<int>();
            if (jc.contains("seed")) cfg.constellation.seed = jc.at("seed").get<std::uint64_t>();
            if (jc.contains("nav_path")) cfg.constellation.nav_path = jc.at("nav_path").get<std::string>();
        }
        if (j.contains("clock_class")) {
            const std::string c = j.at("clock_class").get<std::string>();
            if (c == "quartz_commodity") cfg.clock_class = ClockClass::QuartzCommodity;
            else if (c == "quartz_stable") cfg.clock_class = ClockClass::QuartzStable;
            else throw ConfigError("clock_class must be quartz_commodity|quartz_stable");
        }
        if (j.contains("clock_drift_rate")) {
            cfg.clock_drift_rate = num(j.at("clock_drift_rate"), "clock_drift_rate");
            cfg.sample_clock_drift = false;
        }
        if (j.contains("sample_clock_drift")) {
            cfg.sample_clock_drift = j.at("sample_clock_drift").get<bool>();
        }
        if (j.contains("imu")) {
            const auto& ji = j.at("imu");
            reject_unknown(ji, {"a", "b"}, "imu");
            if (ji.contains("a")) cfg.imu.a = num(ji.at("a"), "imu.a");
            if (ji.contains("b")) cfg.imu.b = num(ji.at("b"), "imu.b");
        }
        if (j.contains("sigma_pseudorange_m")) {
            cfg.sigma_pseudorange_m = num(j.at("sigma_pseudorange_m"), "sigma_pseudorange_m");
        }
        if (j.contains("sigma_doppler_hz")) {
            cfg.sigma_doppler_hz = num(j.at("sigma_doppler_hz"), "sigma_doppler_hz");
        }
        if (j.contains("resync_period_s")) {
            cfg.resync_period_s = num(j.at("resync_period_s"), "resync_period_s");
        }
        if (j.contains("elevation_mask_deg")) {
            cfg.elevation_mask_deg = num(j.at("elevation_mask_deg"), "elevation_mask_deg");
        }
        if (j.contains("attack")) parse_attack(j.at("attack"), cfg.attack);
        if (j.contains("detectors")) parse_detectors(j.at("detectors"), cfg.detectors);
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
    ordered_json j;
    j["duration_s"] = cfg.duration_s;
    j["step_s"] = cfg.step_s;
    {
        ordered_json t;
        t["kind"] = cfg.trajectory.kind == TrajectorySpec::Kind::Static     ? "static"
                    : cfg.trajectory.kind == TrajectorySpec::Kind::Circular ? "circular"
                                                                            : "waypoints";
        t["lat_deg"] = cfg.trajectory.lat_deg;
        t["lon_deg"] = cfg.trajectory.lon_deg;
        t["height_m"] = cfg.trajectory.height_m;
        t["radius_m"] = cfg.trajectory.radius_m;
        t["speed_mps"] = cfg.trajectory.speed_mps;
        ordered_json wps = ordered_json::array();
        for (const auto& w : cfg.trajectory.waypoints) {
            wps.push_back({{"lat_deg", w.lat_deg},
                           {"lon_deg", w.lon_deg},
                           {"height_m", w.height_m},
                           {"speed_mps", w.speed_mps}});
        }
        t["waypoints"] = wps;
        j["trajectory"] = t;
    }
    {
        ordered_json c;
        c["source"] = cfg.constellation.source == ConstellationSpec::Source::Synthetic
                          ? "synthetic"
                          : "rinex";
        c["n_sats"] = cfg.constellation.n_sats;
        c["seed"] = cfg.constellation.seed;
        c["nav_path"] = cfg.constellation.nav_path;
        j["constellation"] = c;
    }
    j["clock_class"] = cfg.clock_class == ClockClass::QuartzStable ? "quartz_stable"
                                                                   : "quartz_commodity";
    j["clock_drift_rate"] = cfg.clock_drift_rate;
    j["sample_clock_drift"] = cfg.sample_clock_drift;
    j["imu"] = {{"a", cfg.imu.a}, {"b", cfg.imu.b}};
    j["sigma_pseudorange_m"] = cfg.sigma_pseudorange_m;
    j["sigma_doppler_hz"] = cfg.sigma_doppler_hz;
    j["resync_period_s"] = cfg.resync_period_s;
    j["elevation_mask_deg"] = cfg.elevation_mask_deg;
    {
        ordered_json a;
        a["jamming"] = cfg.attack.jamming;
        a["jam_start"] = cfg.attack.jam_start;
        a["jam_end"] = cfg.attack.jam_end;
        a["replay"] = cfg.attack.replay;
        a["t_min_replay"] = cfg.attack.t_min_replay;
        a["replay_extra"] = cfg.attack.replay_extra;
        ordered_json pse;
        for (const auto& [sat, tau] : cfg.attack.per_sat_extra) pse[std::to_string(sat)] = tau;
        a["per_sat_extra"] = pse;
        a["affect_all"] = cfg.attack.affect_all;
        a["affected_sats"] = cfg.attack.affected_sats;
        a["adversary_class"] = static_cast<int>(cfg.attack.adversary_class);
        a["constant_offset_hz"] = cfg.attack.freq_policy.constant_offset_hz;
        const auto& pe = cfg.attack.freq_policy.assumed_pos_error;
        const auto& ve = cfg.attack.freq_policy.assumed_vel_error;
        a["assumed_pos_error"] = {pe.x(), pe.y(), pe.z()};
        a["assumed_vel_error"] = {ve.x(), ve.y(), ve.z()};
        j["attack"] = a;
    }
    {
        ordered_json d;
        d["location_enabled"] = cfg.detectors.location_enabled;
        d["clock_enabled"] = cfg.detectors.clock_enabled;
        d["dst_enabled"] = cfg.detectors.dst_enabled;
        d["location_k_sigma"] = cfg.detectors.location_k_sigma;
        d["use_kalman"] = cfg.detectors.use_kalman;
        d["quarantine_epochs"] = cfg.detectors.quarantine_epochs;
        d["suspicion_jump_m"] = cfg.detectors.suspicion_jump_m;
        d["dst"] = {{"min_band_hz", cfg.detectors.dst.min_band_hz},
                    {"k_sigma", cfg.detectors.dst.k_sigma},
                    {"band_growth_hz_per_s", cfg.detectors.dst.band_growth_hz_per_s},
                    {"horizon_s", cfg.detectors.dst.horizon_s},
                    {"m_of_n", cfg.detectors.dst.m_of_n}};
        j["detectors"] = d;
    }
    j["master_seed"] = cfg.master_seed;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string s = dump_config(cfg);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void set_config_param(ScenarioConfig& cfg, const std::string& path, double value) {
    const std::map<std::string, std::function<void(ScenarioConfig&, double)>> setters = {
        {"duration_s", [](auto& c, double v) { c.duration_s = v; }},
        {"step_s", [](auto& c, double v) { c.step_s = v; }},
        {"sigma_pseudorange_m", [](auto& c, double v) { c.sigma_pseudorange_m = v; }},
        {"sigma_doppler_hz", [](auto& c, double v) { c.sigma_doppler_hz = v; }},
        {"resync_period_s", [](auto& c, double v) { c.resync_period_s = v; }},
        {"elevation_mask_deg", [](auto& c, double v) { c.elevation_mask_deg = v; }},
        {"master_seed", [](auto& c, double v) { c.master_seed = static_cast<std::uint64_t>(v); }},
        {"constellation.n_sats", [](auto& c, double v) { c.constellation.n_sats = static_cast<int>(v); }},
        {"constellation.seed", [](auto& c, double v) { c.constellation.seed = static_cast<std::uint64_t>(v); }},
        {"attack.jam_start", [](auto& c, double v) { c.attack.jam_start = v; }},
        {"attack.jam_end", [](auto& c, double v) { c.attack.jam_end = v; }},
        {"attack.t_min_replay", [](auto& c, double v) { c.attack.t_min_replay = v; }},
        {"attack.replay_extra", [](auto& c, double v) { c.attack.replay_extra = v; }},
        {"attack.constant_offset_hz", [](auto& c, double v) { c.attack.freq_policy.constant_offset_hz = v; }},
        {"detectors.location_k_sigma", [](auto& c, double v) { c.detectors.location_k_sigma = v; }},
        {"detectors.quarantine_epochs", [](auto& c, double v) { c.detectors.quarantine_epochs = static_cast<int>(v); }},
        {"detectors.suspicion_jump_m", [](auto& c, double v) { c.detectors.suspicion_jump_m = v; }},
        {"detectors.dst.min_band_hz", [](auto& c, double v) { c.detectors.dst.min_band_hz = v; }},
        {"detectors.dst.k_sigma", [](auto& c, double v) { c.detectors.dst.k_sigma = v; }},
        {"detectors.dst.band_growth_hz_per_s", [](auto& c, double v) { c.detectors.dst.band_growth_hz_per_s = v; }},
        {"detectors.dst.horizon_s", [](auto& c, double v) { c.detectors.dst.horizon_s = v; }},
        {"imu.a", [](auto& c, double v) { c.imu.a = v; }},
        {"imu.b", [](auto& c, double v) { c.imu.b = v; }},
        {"clock_drift_rate", [](auto& c, double v) { c.clock_drift_rate = v; c.sample_clock_drift = false; }},
    };
    const auto it = setters.find(path);
    if (it == setters.end()) throw ConfigError("unknown parameter path '" + path + "'");
    it->second(cfg, value);
}

} // namespace gnss
