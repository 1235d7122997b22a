#include "gnsssim/config.hpp"
#include "gnsssim/errors.hpp"
#include "gnsssim/rinex.hpp"
#include "gnsssim/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes are a stable contract.
constexpr int kOk = 0;
constexpr int kIoError = 2;
constexpr int kParseError = 3;
constexpr int kConfigError = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    out << text;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("GNSSSIM_OUT")) return env;
    return "out";
}

std::string mode_name(gnss::Mode m) {
    switch (m) {
    case gnss::Mode::Normal: return "Normal";
    case gnss::Mode::Alert: return "Alert";
    case gnss::Mode::UnderAttack: return "UnderAttack";
    }
    return "?";
}

void print_summary(const gnss::RunMetrics& metrics) {
    const auto& s = metrics.summary;
    const int n = static_cast<int>(metrics.epochs.size());
    std::printf("epochs:                %d\n", n);
    std::printf("mode: Normal %.0f%%, Alert %.0f%%, UnderAttack %.0f%%\n",
                100.0 * s.epochs_normal / std::max(1, n),
                100.0 * s.epochs_alert / std::max(1, n),
                100.0 * s.epochs_under_attack / std::max(1, n));
    std::printf("attack present:        %s\n", s.attack_present ? "yes" : "no");
    if (s.attack_present) {
        if (s.detection_latency_s >= 0.0) {
            std::printf("detection latency:     %.1f s\n", s.detection_latency_s);
        } else {
            std::printf("detection latency:     not detected\n");
        }
    }
    std::printf("false alarms:          %d\n", s.false_alarms);
    std::printf("max location offset:   %.2f m\n", s.max_loc_offset_m);
    std::printf("max time offset:       %.3g s\n", s.max_time_offset_s);
    double max_dst = 0.0;
    for (const auto& e : metrics.epochs) max_dst = std::max(max_dst, e.max_dst_discrepancy);
    std::printf("max Doppler discrepancy: %.1f Hz\n", max_dst);
}

ordered_json make_manifest(const gnss::ScenarioConfig& cfg) {
    ordered_json m;
    m["tool"] = "gnsssim";
    m["version"] = kVersion;
    m["config_hash"] = gnss::config_hash(cfg);
    m["master_seed"] = cfg.master_seed;
    m["constellation_seed"] = cfg.constellation.seed;
    m["config"] = ordered_json::parse(gnss::dump_config(cfg));
    return m;
}

void write_run_outputs(const fs::path& dir, const gnss::ScenarioConfig& cfg,
                       const gnss::RunMetrics& metrics) {
    fs::create_directories(dir);
    write_file(dir / "series.csv", gnss::write_series(metrics.to_series(), gnss::SeriesFormat::Csv));
    write_file(dir / "series.json",
               gnss::write_series(metrics.to_series(), gnss::SeriesFormat::Json));
    write_file(dir / "manifest.json", make_manifest(cfg).dump(2) + "\n");

    const auto& s = metrics.summary;
    ordered_json js;
    js["epochs"] = metrics.epochs.size();
    js["attack_present"] = s.attack_present;
    js["detection_latency_s"] = s.detection_latency_s;
    js["false_alarms"] = s.false_alarms;
    js["missed_detection"] = s.missed_detection;
    js["max_loc_offset_m"] = s.max_loc_offset_m;
    js["max_time_offset_s"] = s.max_time_offset_s;
    js["epochs_normal"] = s.epochs_normal;
    js["epochs_alert"] = s.epochs_alert;
    js["epochs_under_attack"] = s.epochs_under_attack;
    write_file(dir / "summary.json", js.dump(2) + "\n");
}

int cmd_parse(const std::string& path, const std::string& format) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }

    try {
        const bool is_nav = text.find("NAV DATA") != std::string::npos;
        if (is_nav) {
            const gnss::RinexNavFile nav = gnss::parse_nav(text);
            if (format == "summary") {
                std::set<int> sats;
                for (const auto& r : nav.records) sats.insert(r.sat_id);
                std::printf("navigation records:  %zu\n", nav.records.size());
                std::printf("satellites:          %zu (", sats.size());
                bool first = true;
                for (int s : sats) {
                    std::printf("%sG%02d", first ? "" : " ", s);
                    first = false;
                }
                std::printf(")\n");
            } else {
                ordered_json j = ordered_json::array();
                for (const auto& r : nav.records) {
                    j.push_back({{"sat", r.sat_id}, {"toe", r.toe}, {"sqrt_a", r.sqrt_a},
                                 {"e", r.e}});
                }
                std::cout << j.dump(2) << "\n";
            }
            return kOk;
        }

        const gnss::RinexObsFile obs = gnss::parse_obs(text);
        std::set<int> sats;
        int n_obs = 0;
        for (const auto& e : obs.epochs) {
            for (const auto& [sat, o] : e.sats) {
                sats.insert(sat);
                if (o.available) ++n_obs;
            }
        }
        if (format == "summary") {
            std::printf("epochs:              %zu\n", obs.epochs.size());
            if (!obs.epochs.empty()) {
                std::printf("time span:           %.1f .. %.1f s of week\n", obs.epochs.front().t,
                            obs.epochs.back().t);
            }
            std::printf("satellites:          %zu (", sats.size());
            bool first = true;
            for (int s : sats) {
                std::printf("%sG%02d", first ? "" : " ", s);
                first = false;
            }
            std::printf(")\n");
            std::printf("observation types:  ");
            for (const auto& ty : obs.header.obs_types) std::printf(" %s", ty.c_str());
            std::printf("\n");
            std::printf("usable pseudoranges: %d\n", n_obs);
        } else if (format == "csv") {
            std::printf("t,sat,pseudorange,doppler,phase,available\n");
            for (const auto& e : obs.epochs) {
                for (const auto& [sat, o] : e.sats) {
                    std::printf("%.3f,%d,%s,%s,%s,%d\n", e.t, sat,
                                o.pseudorange ? std::to_string(*o.pseudorange).c_str() : "",
                                o.doppler ? std::to_string(*o.doppler).c_str() : "",
                                o.phase ? std::to_string(*o.phase).c_str() : "",
                                o.available ? 1 : 0);
                }
            }
        } else { // json
            ordered_json j;
            j["epochs"] = obs.epochs.size();
            j["obs_types"] = obs.header.obs_types;
            j["satellites"] = sats;
            ordered_json eps = ordered_json::array();
            for (const auto& e : obs.epochs) {
                ordered_json je;
                je["t"] = e.t;
                for (const auto& [sat, o] : e.sats) {
                    ordered_json jo;
                    if (o.pseudorange) jo["pseudorange"] = *o.pseudorange;
                    if (o.doppler) jo["doppler"] = *o.doppler;
                    if (o.phase) jo["phase"] = *o.phase;
                    jo["available"] = o.available;
                    je["sats"]["G" + std::to_string(sat)] = jo;
                }
                eps.push_back(je);
            }
            j["data"] = eps;
            std::cout << j.dump(2) << "\n";
        }
        return kOk;
    } catch (const gnss::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    }
}

gnss::ScenarioConfig load_or_exit(const std::string& config_path, int& rc) {
    rc = kOk;
    try {
        return gnss::load_config_file(config_path);
    } catch (const gnss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        rc = kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kIoError;
    }
    return {};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    int rc = kOk;
    gnss::ScenarioConfig cfg = load_or_exit(config_path, rc);
    if (rc != kOk) return rc;
    if (seed) cfg.master_seed = *seed;

    try {
        const gnss::RunMetrics metrics = gnss::run(cfg);
        write_run_outputs(out_dir, cfg, metrics);
        print_summary(metrics);
        std::printf("outputs: %s\n", out_dir.c_str());
        return kOk;
    } catch (const gnss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
}

int cmd_replicate(const std::string& figure, const std::string& config_path,
                  const std::string& out_dir) {
    int rc = kOk;
    gnss::ScenarioConfig cfg = load_or_exit(config_path, rc);
    if (rc != kOk) return rc;

    try {
        const gnss::FigureResult result = gnss::replicate_figure(figure, cfg);
        const fs::path dir = fs::path(out_dir) / figure;
        fs::create_directories(dir);
        for (const auto& [name, series] : result.series) {
            write_file(dir / (name + ".csv"),
                       gnss::write_series(series, gnss::SeriesFormat::Csv));
        }
        write_run_outputs(dir, cfg, result.metrics);
        print_summary(result.metrics);
        std::printf("figure series: %s\n", dir.string().c_str());
        return kOk;
    } catch (const gnss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir) {
    if (values.empty()) {
        std::cerr << "config error: empty value list for --values\n";
        return kConfigError;
    }
    int rc = kOk;
    const gnss::ScenarioConfig base = load_or_exit(config_path, rc);
    if (rc != kOk) return rc;

    std::vector<gnss::RunMetrics> results(values.size());
    std::string first_error;
    try {
        // Validate the parameter path up front so a bad path fails fast.
        gnss::ScenarioConfig probe = base;
        gnss::set_config_param(probe, param, values.front());
    } catch (const gnss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    // Independent runs; parallel, no shared mutable state.
    std::vector<std::thread> workers;
    std::vector<std::string> errors(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        workers.emplace_back([&, i] {
            try {
                gnss::ScenarioConfig cfg = base;
                gnss::set_config_param(cfg, param, values[i]);
                results[i] = gnss::run(cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& err : errors) {
        if (!err.empty()) {
            std::cerr << "config error: " << err << "\n";
            return kConfigError;
        }
    }

    std::printf("%-14s %16s %16s %14s %12s\n", param.c_str(), "max_loc_off_m", "max_time_off_s",
                "det_latency_s", "false_alarms");
    std::ostringstream csv;
    csv << param << ",max_loc_offset_m,max_time_offset_s,detection_latency_s,false_alarms\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& s = results[i].summary;
        std::printf("%-14g %16.2f %16.3g %14.1f %12d\n", values[i], s.max_loc_offset_m,
                    s.max_time_offset_s, s.detection_latency_s, s.false_alarms);
        csv << values[i] << ',' << s.max_loc_offset_m << ',' << s.max_time_offset_s << ','
            << s.detection_latency_s << ',' << s.false_alarms << "\n";
    }
    try {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "sweep.csv", csv.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

int cmd_report(const std::string& run_dir) {
    try {
        const ordered_json manifest =
            ordered_json::parse(read_file((fs::path(run_dir) / "manifest.json").string()));
        const ordered_json summary =
            ordered_json::parse(read_file((fs::path(run_dir) / "summary.json").string()));
        std::printf("run:                 %s\n", run_dir.c_str());
        std::printf("tool:                %s %s\n", manifest.value("tool", "?").c_str(),
                    manifest.value("version", "?").c_str());
        std::printf("config hash:         %llu\n",
                    static_cast<unsigned long long>(manifest.value("config_hash", 0ull)));
        std::printf("master seed:         %llu\n",
                    static_cast<unsigned long long>(manifest.value("master_seed", 0ull)));
        std::printf("epochs:              %llu\n",
                    static_cast<unsigned long long>(summary.value("epochs", 0ull)));
        std::printf("attack present:      %s\n",
                    summary.value("attack_present", false) ? "yes" : "no");
        std::printf("detection latency:   %.1f s\n", summary.value("detection_latency_s", -1.0));
        std::printf("false alarms:        %d\n", summary.value("false_alarms", 0));
        std::printf("max location offset: %.2f m\n", summary.value("max_loc_offset_m", 0.0));
        std::printf("max time offset:     %.3g s\n", summary.value("max_time_offset_s", 0.0));
        return kOk;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GNSS positioning, attack and countermeasure simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // parse
    std::string parse_path, parse_format = "summary";
    auto* parse_cmd = app.add_subcommand("parse", "Parse a RINEX file and summarize it");
    parse_cmd->add_option("path", parse_path, "RINEX observation or navigation file")->required();
    parse_cmd->add_option("--format", parse_format, "Output format")
        ->check(CLI::IsMember({"summary", "csv", "json"}));

    // simulate
    std::string sim_config, sim_out = default_out_dir();
    std::optional<std::uint64_t> sim_seed;
    auto* sim_cmd = app.add_subcommand("simulate", "Run one scenario end to end");
    sim_cmd->add_option("config", sim_config, "Scenario config (JSON)")->required();
    sim_cmd->add_option("--out", sim_out, "Output directory");
    std::uint64_t seed_val = 0;
    auto* seed_opt = sim_cmd->add_option("--seed", seed_val, "Master seed override");

    // replicate
    std::string rep_figure, rep_config, rep_out = default_out_dir();
    auto* rep_cmd = app.add_subcommand("replicate", "Re-run one of the named experiments");
    rep_cmd->add_option("figure", rep_figure, "Figure name (fig2a..fig9)")->required();
    rep_cmd->add_option("config", rep_config, "Base scenario config (JSON)")->required();
    rep_cmd->add_option("--out", rep_out, "Output directory");

    // sweep
    std::string swp_config, swp_param, swp_out = default_out_dir();
    std::vector<double> swp_values;
    auto* swp_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    swp_cmd->add_option("config", swp_config, "Scenario config (JSON)")->required();
    swp_cmd->add_option("--param", swp_param, "Dotted parameter path")->required();
    swp_cmd->add_option("--values", swp_values, "Values to sweep")->delimiter(',');

    // report
    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "Summarize a previous run directory");
    report_cmd->add_option("dir", report_dir, "Run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (*parse_cmd) return cmd_parse(parse_path, parse_format);
    if (*sim_cmd) {
        if (*seed_opt) sim_seed = seed_val;
        return cmd_simulate(sim_config, sim_out, sim_seed);
    }
    if (*rep_cmd) return cmd_replicate(rep_figure, rep_config, rep_out);
    if (*swp_cmd) return cmd_sweep(swp_config, swp_param, swp_values, swp_out);
    if (*report_cmd) return cmd_report(report_dir);
    return kOk;
}
