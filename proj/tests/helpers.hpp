#pragma once

#include "gnsssim/constellation.hpp"
#include "gnsssim/pvt.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testutil {

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Receiver on the surface plus n satellites at GPS-like radius, all above a
// 10 degree elevation mask. Deterministic per seed.
struct Geometry {
    gnss::Vec3 rx;
    std::vector<gnss::Vec3> sats;
};

inline Geometry random_geometry(std::mt19937_64& rng, int n_sats = 8) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Geometry g;
    gnss::Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
    dir.normalize();
    g.rx = 6.371e6 * dir;
    const gnss::Vec3 up = dir;
    while (static_cast<int>(g.sats.size()) < n_sats) {
        gnss::Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        v.normalize();
        const gnss::Vec3 s = 2.66e7 * v;
        const gnss::Vec3 los = (s - g.rx).normalized();
        if (los.dot(up) > std::sin(10.0 * 3.14159265358979 / 180.0)) g.sats.push_back(s);
    }
    return g;
}

inline gnss::PseudorangeSet forward_model(const Geometry& g, double clock_bias_s) {
    gnss::PseudorangeSet set;
    for (std::size_t i = 0; i < g.sats.size(); ++i) {
        gnss::PseudorangeEntry e;
        e.sat_id = static_cast<int>(i) + 1;
        e.sat_pos = g.sats[i];
        e.pseudorange = gnss::predict_pseudorange(g.sats[i], g.rx, clock_bias_s);
        set.entries.push_back(e);
    }
    return set;
}

} // namespace testutil
