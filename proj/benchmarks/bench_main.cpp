#include <benchmark/benchmark.h>

#include "gnsssim/geodesy.hpp"
#include "gnsssim/rinex.hpp"
#include "gnsssim/scenario.hpp"

#include <numbers>
#include <random>
#include <sstream>

using namespace gnss;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

PseudorangeSet make_obs(int n_sats) {
    const auto set = synth_constellation(std::max(n_sats, 4), 1);
    ReceiverState rx;
    rx.pos = geodetic_to_ecef(45.0 * kDeg, 0.0, 100.0);
    PseudorangeSet obs;
    for (const auto& eph : set) {
        const SatState s = sat_state(eph, 600.0);
        if (!visible(s, rx, 10.0)) continue;
        PseudorangeEntry e;
        e.sat_id = eph.sat_id;
        e.sat_pos = s.pos;
        e.sat_vel = s.vel;
        e.pseudorange = (s.pos - rx.pos).norm();
        obs.entries.push_back(e);
        if (static_cast<int>(obs.entries.size()) == n_sats) break;
    }
    return obs;
}

void BM_SatState(benchmark::State& state) {
    const auto set = synth_constellation(8, 1);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sat_state(set[0], 600.0 + t));
        t += 1.0;
        if (t > 3600.0) t = 0.0;
    }
}
BENCHMARK(BM_SatState);

void BM_SolvePvt(benchmark::State& state) {
    const auto obs = make_obs(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_pvt(obs));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SolvePvt)->Arg(4)->Arg(6)->Arg(8);

void BM_DstFit(benchmark::State& state) {
    DopplerHistory h(50);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 5.0);
    for (int i = 0; i < 50; ++i) h.push(1, i, -1500.0 + 8.0 * i + noise(rng));
    for (auto _ : state) benchmark::DoNotOptimize(dst_fit(h, 1));
}
BENCHMARK(BM_DstFit);

void BM_KalmanPredictUpdate(benchmark::State& state) {
    KalmanState ks;
    const Eigen::Matrix3d r = 25.0 * Eigen::Matrix3d::Identity();
    for (auto _ : state) {
        ks = kalman_predict(ks, 1.0);
        ks = kalman_update(ks, ks.pos(), r);
        benchmark::DoNotOptimize(ks);
    }
}
BENCHMARK(BM_KalmanPredictUpdate);

void BM_ParseObs(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.duration_s = 60.0;
    const auto constellation = synth_constellation(8, 1);
    std::mt19937_64 rng(1);
    RinexObsFile f;
    f.header.obs_types = {"C1", "L1", "D1"};
    for (int t = 0; t <= 60; ++t) {
        const ReceiverState rx = trajectory_state(cfg.trajectory, t);
        f.epochs.push_back(generate_measurements(cfg, constellation, t, rx, 0.0, rng));
    }
    const std::string text = write_obs(f);
    for (auto _ : state) benchmark::DoNotOptimize(parse_obs(text));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseObs);

void BM_ScenarioRun(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.duration_s = static_cast<double>(state.range(0));
    cfg.attack.jamming = true;
    cfg.attack.jam_start = 60.0;
    cfg.attack.jam_end = 100.0;
    cfg.attack.replay = true;
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
    state.SetItemsProcessed(state.iterations() * (state.range(0) + 1));
}
BENCHMARK(BM_ScenarioRun)->Arg(60)->Arg(300)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
