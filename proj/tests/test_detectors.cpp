#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gnsssim/detectors.hpp"
#include "gnsssim/errors.hpp"

#include <cmath>
#include <random>

using namespace gnss;

namespace {

PvtSolution solution_at(const Vec3& pos, double clock_offset = 0.0) {
    PvtSolution s;
    s.pos = pos;
    s.clock_offset = clock_offset;
    s.converged = true;
    s.n_sats = 6;
    return s;
}

EpochStatus locked_status(int n = 6) {
    EpochStatus st;
    st.locked = true;
    st.n_sats = n;
    return st;
}

EpochStatus lost_status() {
    EpochStatus st;
    st.locked = false;
    st.n_sats = 0;
    return st;
}

} // namespace

TEST_CASE("mode machine transitions") {
    ModeState st;

    SUBCASE("satellite count dropping below four enters Alert") {
        EpochStatus s = locked_status(3);
        st = mode_step(st, s, std::nullopt, 1.0);
        CHECK(st.mode == Mode::Alert);
        CHECK(st.entered_at == 1.0);
    }
    SUBCASE("loss of lock enters Alert, passing tests restore Normal") {
        st = mode_step(st, lost_status(), std::nullopt, 1.0);
        REQUIRE(st.mode == Mode::Alert);

        TestResults pass;
        pass.location = TestOutcome::Pass;
        st = mode_step(st, locked_status(), pass, 2.0, solution_at({1, 2, 3}));
        CHECK(st.mode == Mode::Normal);
        REQUIRE(st.accepted.size() == 1); // the buffered Alert solution is released
        CHECK(st.accepted[0].pos == Vec3{1, 2, 3});
    }
    SUBCASE("any failing test discards the buffer and enters UnderAttack") {
        st = mode_step(st, lost_status(), std::nullopt, 1.0);
        st = mode_step(st, locked_status(), std::nullopt, 2.0, solution_at({9, 9, 9}));
        REQUIRE(st.pending.size() == 1);

        TestResults fail;
        fail.location = TestOutcome::Pass;
        fail.doppler = TestOutcome::Fail;
        st = mode_step(st, locked_status(), fail, 3.0, solution_at({9, 9, 9}));
        CHECK(st.mode == Mode::UnderAttack);
        CHECK(st.pending.empty());
        CHECK(st.accepted.empty());
    }
    SUBCASE("inconclusive tests keep Alert") {
        st = mode_step(st, lost_status(), std::nullopt, 1.0);
        TestResults inc;
        inc.location = TestOutcome::Pass;
        inc.doppler = TestOutcome::Inconclusive;
        st = mode_step(st, locked_status(), inc, 2.0, solution_at({0, 0, 0}));
        CHECK(st.mode == Mode::Alert);
    }
    SUBCASE("UnderAttack exits only after a full quarantine of passes") {
        st.mode = Mode::UnderAttack;
        TestResults pass;
        pass.clock = TestOutcome::Pass;
        for (int i = 0; i < 9; ++i) {
            st = mode_step(st, locked_status(), pass, 10.0 + i, std::nullopt, 10);
            CHECK(st.mode == Mode::UnderAttack);
        }
        st = mode_step(st, locked_status(), pass, 19.0, std::nullopt, 10);
        CHECK(st.mode == Mode::Normal);
    }
    SUBCASE("a failing epoch resets the quarantine counter") {
        st.mode = Mode::UnderAttack;
        TestResults pass;
        pass.clock = TestOutcome::Pass;
        TestResults fail;
        fail.clock = TestOutcome::Fail;
        for (int i = 0; i < 9; ++i) st = mode_step(st, locked_status(), pass, i, std::nullopt, 10);
        st = mode_step(st, locked_status(), fail, 9.0, std::nullopt, 10);
        for (int i = 0; i < 9; ++i) {
            st = mode_step(st, locked_status(), pass, 10.0 + i, std::nullopt, 10);
            CHECK(st.mode == Mode::UnderAttack);
        }
    }
    SUBCASE("tests during Normal are ignored with a warning flag") {
        TestResults t;
        t.clock = TestOutcome::Fail;
        st = mode_step(st, locked_status(), t, 1.0);
        CHECK(st.mode == Mode::Normal);
        CHECK(st.warned_ignored_tests);
    }
}

TEST_CASE("mode machine never accepts solutions from a failing Alert episode") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        ModeState st;
        bool episode_failed = false;
        for (int step = 0; step < 60; ++step) {
            const bool locked = coin(rng) != 0;
            std::optional<TestResults> tests;
            if (st.mode != Mode::Normal && locked) {
                TestResults t;
                const int o = coin(rng);
                t.location = o == 0   ? TestOutcome::Fail
                             : o == 1 ? TestOutcome::Inconclusive
                                      : TestOutcome::Pass;
                tests = t;
                if (st.mode == Mode::Alert && o == 0) episode_failed = true;
            }
            const auto before = st.mode;
            st = mode_step(st, locked ? locked_status() : lost_status(), tests,
                           static_cast<double>(step), solution_at({1.0 * step, 0, 0}), 5);
            if (!st.accepted.empty()) {
                CHECK(before == Mode::Alert);
                CHECK_FALSE(episode_failed); // safety property
            }
            if (st.mode == Mode::Normal) episode_failed = false;
        }
    }
}

TEST_CASE("IMU error law and dead reckoning") {
    const ImuErrorModel imu = ImuErrorModel::crista_like();
    CHECK(imu.error(0.0) == 0.0);
    CHECK(imu.error(60.0) >= imu.error(30.0));
    // Superlinear growth.
    for (double dt : {10.0, 30.0, 60.0, 120.0}) CHECK(imu.error(2 * dt) > 2 * imu.error(dt));

    std::mt19937_64 rng(5);
    ReceiverState rx;
    rx.pos = Vec3{6.371e6, 0.0, 0.0};

    const InertialPrediction p0 = inertial_predict(rx, imu, 0.0, rng);
    CHECK(p0.uncertainty == 0.0);
    CHECK(p0.pos == rx.pos);

    const InertialPrediction p60 = inertial_predict(rx, imu, 60.0, rng);
    CHECK(p60.uncertainty == doctest::Approx(imu.error(60.0)));
    CHECK((p60.pos - rx.pos).norm() <= p60.uncertainty);

    CHECK_THROWS_AS(inertial_predict(rx, imu, -1.0, rng), ConfigError);
}

TEST_CASE("location test thresholds") {
    InertialPrediction pred;
    pred.pos = Vec3{100.0, 0.0, 0.0};
    pred.uncertainty = 50.0;

    SUBCASE("zero discrepancy passes") {
        const auto r = location_test(pred, solution_at(pred.pos), 3.0);
        CHECK(r.pass);
        CHECK(r.discrepancy == 0.0);
    }
    SUBCASE("500 m displacement vs 50 m uncertainty fails at k=3") {
        const auto r = location_test(pred, solution_at(pred.pos + Vec3{500.0, 0.0, 0.0}), 3.0);
        CHECK_FALSE(r.pass);
        CHECK(r.discrepancy == doctest::Approx(500.0));
    }
    SUBCASE("inflated uncertainty swallows the same attack (missed detection)") {
        pred.uncertainty = 400.0; // long unavailability
        const auto r = location_test(pred, solution_at(pred.pos + Vec3{500.0, 0.0, 0.0}), 3.0);
        CHECK(r.pass);
    }
}

TEST_CASE("kalman predict and update") {
    KalmanState ks;
    ks.x << 10.0, 20.0, 30.0, 0.0, 0.0, 0.0;
    ks.P = Eigen::Matrix<double, 6, 6>::Identity();

    SUBCASE("zero velocity and zero noise leaves position still") {
        ks.q_accel = 0.0;
        ks.vel_bias_sigma = 0.0;
        const KalmanState out = kalman_predict(ks, 5.0);
        CHECK(out.pos() == Vec3{10.0, 20.0, 30.0});
    }
    SUBCASE("constant-velocity transition") {
        ks.x.tail<3>() = Vec3{1.0, 0.0, 0.0};
        const KalmanState out = kalman_predict(ks, 10.0);
        CHECK(out.pos().x() == doctest::Approx(20.0));
        CHECK(out.pos().y() == doctest::Approx(20.0));
    }
    SUBCASE("covariance trace grows on predict, shrinks on update") {
        const KalmanState pred = kalman_predict(ks, 1.0);
        CHECK(pred.P.trace() >= ks.P.trace());
        const KalmanState upd =
            kalman_update(pred, pred.pos(), 0.01 * Eigen::Matrix3d::Identity());
        CHECK(upd.P.trace() <= pred.P.trace());
    }
    SUBCASE("measurement equal to prediction with tiny R pins the state") {
        const KalmanState out = kalman_update(ks, ks.pos(), 1e-9 * Eigen::Matrix3d::Identity());
        CHECK((out.pos() - ks.pos()).norm() < 1e-6);
    }
    SUBCASE("uninformative measurement leaves the state unchanged") {
        const KalmanState out =
            kalman_update(ks, ks.pos() + Vec3{100.0, 0.0, 0.0}, 1e12 * Eigen::Matrix3d::Identity());
        CHECK((out.pos() - ks.pos()).norm() < 1e-6);
    }
    SUBCASE("two identical updates equal one update at halved variance") {
        const Vec3 z{11.0, 21.0, 29.0};
        const Eigen::Matrix3d r = 4.0 * Eigen::Matrix3d::Identity();
        const KalmanState twice = kalman_update(kalman_update(ks, z, r), z, r);
        const KalmanState once = kalman_update(ks, z, r / 2.0);
        CHECK((twice.x - once.x).norm() < 1e-6 * std::max(1.0, once.x.norm()));
        CHECK((twice.P - once.P).norm() < 1e-6);
    }
    SUBCASE("non-PSD covariance is a numeric error") {
        ks.P = -Eigen::Matrix<double, 6, 6>::Identity();
        CHECK_THROWS_AS(kalman_predict(ks, 1.0), NumericError);
    }
    SUBCASE("holdover uncertainty radius grows linearly") {
        KalmanState k2;
        k2.P = Eigen::Matrix<double, 6, 6>::Zero();
        std::vector<double> u;
        KalmanState cur = k2;
        for (int i = 0; i < 240; ++i) {
            cur = kalman_predict(cur, 1.0);
            u.push_back(cur.uncertainty());
        }
        // Linear-fit R^2.
        double st2 = 0, sy = 0, sty = 0, syy = 0, stt = 0;
        const double n = static_cast<double>(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double t = static_cast<double>(i + 1);
            st2 += t;
            sy += u[i];
        }
        const double mt = st2 / n, my = sy / n;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double t = static_cast<double>(i + 1);
            stt += (t - mt) * (t - mt);
            sty += (t - mt) * (u[i] - my);
            syy += (u[i] - my) * (u[i] - my);
        }
        const double r2 = (sty * sty) / (stt * syy);
        CHECK(r2 >= 0.95);
    }
}

TEST_CASE("clock holdover envelopes") {
    ClockModel cm;
    cm.last_sync_time = 100.0;

    SUBCASE("floor at zero holdover") {
        cm.device_class = ClockClass::QuartzStable;
        const auto p = clock_predict(cm, 100.0);
        CHECK(p.envelope == doctest::Approx(1e-7));
    }
    SUBCASE("stable quartz holds a microsecond for 350 s") {
        cm.device_class = ClockClass::QuartzStable;
        const auto p = clock_predict(cm, 450.0);
        CHECK(p.envelope == doctest::Approx(1e-6).epsilon(0.05));
    }
    SUBCASE("commodity quartz admits 20-32 ms after 120 s") {
        cm.device_class = ClockClass::QuartzCommodity;
        const auto p = clock_predict(cm, 220.0);
        CHECK(p.envelope >= 0.020);
        CHECK(p.envelope <= 0.032);
    }
    SUBCASE("envelope widens with holdover duration") {
        cm.device_class = ClockClass::QuartzCommodity;
        CHECK(clock_predict(cm, 400.0).envelope > clock_predict(cm, 200.0).envelope);
    }
    SUBCASE("drift estimate shifts the expected offset") {
        cm.drift_rate = 1e-5;
        cm.last_offset = 2e-4;
        const auto p = clock_predict(cm, 200.0);
        CHECK(p.expected == doctest::Approx(2e-4 + 1e-5 * 100.0));
    }
    SUBCASE("prediction before last sync rejected") {
        CHECK_THROWS_AS(clock_predict(cm, 99.0), ConfigError);
    }
}

TEST_CASE("clock test catches a 20 ms replay only on a stable oscillator") {
    ClockModel cm;
    cm.last_sync_time = 0.0;

    // Solved offset after 120 s of unavailability plus a 20 ms replay.
    const double solved = 0.020;

    cm.device_class = ClockClass::QuartzStable;
    CHECK_FALSE(clock_test(cm, solved, 120.0).pass);

    cm.device_class = ClockClass::QuartzCommodity;
    CHECK(clock_test(cm, solved, 120.0).pass); // missed detection

    SUBCASE("exact expected value passes either way") {
        cm.device_class = ClockClass::QuartzStable;
        CHECK(clock_test(cm, 0.0, 120.0).pass);
    }
    SUBCASE("stable quartz catches 1 ms replays through 1000 s holdover") {
        cm.device_class = ClockClass::QuartzStable;
        for (double dt : {10.0, 100.0, 500.0, 1000.0}) {
            CHECK_FALSE(clock_test(cm, 0.001, dt).pass);
        }
    }
}

TEST_CASE("doppler history and fit") {
    DopplerHistory h(50);

    SUBCASE("fit requires ten samples") {
        for (int i = 0; i < 9; ++i) h.push(1, i, 100.0 - 0.6 * i);
        CHECK_THROWS_AS(dst_fit(h, 1), NumericError);
        CHECK(h.satellites().empty());
    }
    SUBCASE("exact line recovery") {
        for (int i = 0; i < 30; ++i) h.push(1, i, 100.0 - 0.6 * i);
        const DopplerFit f = dst_fit(h, 1);
        CHECK(f.rate == doctest::Approx(-0.6).epsilon(1e-9));
        CHECK(f.intercept == doctest::Approx(100.0).epsilon(1e-9));
        CHECK(f.sigma == doctest::Approx(1.0)); // residuals ~0, floored at 1 Hz
        CHECK(f.window_end == 29.0);
    }
    SUBCASE("constant samples give zero rate") {
        for (int i = 0; i < 20; ++i) h.push(2, i, 250.0);
        CHECK(dst_fit(h, 2).rate == doctest::Approx(0.0));
    }
    SUBCASE("buffer keeps the newest 50 samples") {
        for (int i = 0; i < 80; ++i) h.push(3, i, 1.0 * i);
        CHECK(h.samples(3).size() == 50);
        CHECK(h.samples(3).front().t == 30.0);
    }
    SUBCASE("out-of-order samples rejected") {
        h.push(4, 10.0, 0.0);
        CHECK_THROWS_AS(h.push(4, 9.0, 0.0), ConfigError);
    }
    SUBCASE("noisy GPS-like window keeps residuals within 20 Hz") {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> noise(0.0, 5.0);
        for (int i = 0; i < 50; ++i) {
            // Slightly curved Doppler track, like a real pass.
            const double d = -1500.0 + 8.0 * i + 0.004 * i * i;
            h.push(5, i, d + noise(rng));
        }
        const DopplerFit f = dst_fit(h, 5);
        for (const auto& s : h.samples(5)) {
            CHECK(std::abs(s.shift - (f.intercept + f.rate * s.t)) <= 20.0);
        }
    }
}

TEST_CASE("doppler prediction band") {
    DopplerHistory h(50);
    for (int i = 0; i < 50; ++i) h.push(1, i, 100.0 - 0.6 * i);
    const DopplerFit f = dst_fit(h, 1);
    const DstConfig cfg;

    SUBCASE("prediction at the window end equals the fitted line") {
        const auto p = dst_predict(f, f.window_end, cfg);
        CHECK(p.shift == doctest::Approx(f.intercept + f.rate * f.window_end));
        CHECK(p.band == doctest::Approx(cfg.min_band_hz));
    }
    SUBCASE("band grows with extrapolation length") {
        CHECK(dst_predict(f, f.window_end + 60.0, cfg).band >
              dst_predict(f, f.window_end + 10.0, cfg).band);
    }
    SUBCASE("band stays below 300 Hz at +100 s") {
        CHECK(dst_predict(f, f.window_end + 100.0, cfg).band < 300.0);
    }
    SUBCASE("horizon enforced") {
        CHECK_THROWS_AS(dst_predict(f, f.window_end + 301.0, cfg), NumericError);
        CHECK_NOTHROW(dst_predict(f, f.window_end + 299.0, cfg));
    }
}

TEST_CASE("doppler test verdicts") {
    DstConfig cfg;
    std::map<int, DopplerPrediction> pred;
    std::map<int, double> meas;

    SUBCASE("no overlap is inconclusive") {
        pred[1] = {0.0, 50.0};
        meas[2] = 10.0;
        CHECK(dst_test(pred, meas, cfg).outcome == TestOutcome::Inconclusive);
    }
    SUBCASE("measured equal to predicted passes") {
        pred[1] = {-2000.0, 50.0};
        meas[1] = -2000.0;
        const auto r = dst_test(pred, meas, cfg);
        CHECK(r.outcome == TestOutcome::Pass);
        CHECK(r.max_discrepancy == 0.0);
    }
    SUBCASE("class-1 adversary at zero Doppler against a -2 kHz prediction fails") {
        pred[1] = {-2000.0, 100.0};
        meas[1] = 0.0;
        const auto r = dst_test(pred, meas, cfg);
        CHECK(r.outcome == TestOutcome::Fail);
        CHECK(r.max_discrepancy == doctest::Approx(2000.0));
    }
    SUBCASE("300 Hz residual fails with the default band") {
        pred[1] = {-500.0, 100.0};
        meas[1] = -200.0;
        CHECK(dst_test(pred, meas, cfg).outcome == TestOutcome::Fail);
    }
    SUBCASE("m-of-n aggregation") {
        cfg.m_of_n = 2;
        pred[1] = {0.0, 50.0};
        pred[2] = {0.0, 50.0};
        meas[1] = 500.0; // one outlier tolerated at m=2
        meas[2] = 10.0;
        CHECK(dst_test(pred, meas, cfg).outcome == TestOutcome::Pass);
        meas[2] = 400.0;
        CHECK(dst_test(pred, meas, cfg).outcome == TestOutcome::Fail);
    }
}
