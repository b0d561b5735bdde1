// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rris/channel.hpp"
#include "rris/rng.hpp"
#include "test_helpers.hpp"

using namespace rris;

namespace {

// Largest per-entry phase difference after removing the common offset.
double aligned_phase_error(const VecC& a, const VecC& b) {
    const Cplx ref = b(0) / a(0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(std::arg(b(i) / (a(i) * ref))));
    return worst;
}

} // namespace

TEST_CASE("pathloss values") {
    CHECK(pathloss(1.0, 1.0) == doctest::Approx(std::pow(10.0, 3.245)).epsilon(1e-12));
    const double d = std::sqrt(54.32);
    CHECK(pathloss(d, 28.0) ==
          doctest::Approx(std::pow(10.0, 3.245) * 54.32 * 784.0).epsilon(1e-12));
    CHECK(pathloss(2.0, 5.0) == doctest::Approx(4.0 * pathloss(1.0, 5.0)).epsilon(1e-12));
    CHECK_THROWS_AS(pathloss(0.0, 28.0), std::domain_error);
    CHECK_THROWS_AS(pathloss(1.0, -1.0), std::domain_error);
}

TEST_CASE("steering_y basics") {
    const double lambda = 0.0107;
    const VecC ones = steering_y(0.0, 0.7, 5, lambda / 2, lambda);
    for (int m = 0; m < 5; ++m)
        CHECK(std::abs(ones(m) - Cplx(1.0, 0.0)) < 1e-15);

    // sin(theta) sin(phi) = 1 at theta = phi = pi/2
    const VecC edge = steering_y(kPi / 2, kPi / 2, 2, lambda / 2, lambda);
    CHECK(std::abs(edge(0) - Cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(edge(1) - Cplx(-1.0, 0.0)) < 1e-12);

    const VecC a = steering_y(kPi / 3, kPi / 4, 4, lambda / 2, lambda);
    const double f = std::sin(kPi / 3) * std::sin(kPi / 4);
    for (int m = 0; m < 4; ++m) {
        CHECK(std::abs(a(m)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::arg(a(m) * std::polar(1.0, -kPi * m * f)) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("steering_z basics") {
    const double lambda = 0.0107;
    const VecC ones = steering_z(kPi / 2, 4, lambda / 2, lambda);
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(ones(m) - Cplx(1.0, 0.0)) < 1e-12);

    const VecC edge = steering_z(0.0, 2, lambda / 2, lambda);
    CHECK(std::abs(edge(1) - Cplx(-1.0, 0.0)) < 1e-12);

    const VecC a = steering_z(0.6, 4, lambda / 2, lambda);
    for (int m = 0; m < 4; ++m)
        CHECK(std::arg(a(m) * std::polar(1.0, -kPi * m * std::cos(0.6))) ==
              doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("farfield single path equals gain times Kronecker atom") {
    const Scene scene = testing::baseline_scene();
    const SubarrayConfig& cfg = scene.subarrays[0];
    PathEntry p;
    p.theta = 1.1;
    p.phi = -0.4;
    p.dist = 7.37;
    p.pathloss = pathloss(p.dist, scene.carrier_freq_ghz);
    p.gain = std::polar(1.0 / std::sqrt(p.pathloss), -2.0 * kPi * p.dist / scene.wavelength);

    const VecC h = farfield_channel({p}, cfg, scene.wavelength);
    const VecC ay = steering_y(p.theta, p.phi, cfg.elements_y, cfg.spacing_y, scene.wavelength);
    const VecC az = steering_z(p.phi, cfg.elements_z, cfg.spacing_z, scene.wavelength);
    for (int my = 0; my < cfg.elements_y; ++my)
        for (int mz = 0; mz < cfg.elements_z; ++mz)
            CHECK(std::abs(h(my * cfg.elements_z + mz) - p.gain * ay(my) * az(mz)) < 1e-18);
    CHECK(h.norm() > 0.0);
}

TEST_CASE("farfield all-ones for unit gain boresight-equivalent path") {
    SubarrayConfig cfg;
    cfg.spacing_y = cfg.spacing_z = 0.5;
    PathEntry p;
    p.theta = 0.0;
    p.phi = kPi / 2.0; // cos(phi) = 0 and sin(theta) = 0: both phases vanish
    p.gain = Cplx(1.0, 0.0);
    p.dist = 1.0;
    const VecC h = farfield_channel({p}, cfg, 1.0);
    for (Eigen::Index i = 0; i < h.size(); ++i)
        CHECK(std::abs(h(i) - Cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("two-path component norms realize the power ratio") {
    const Scene scene = testing::baseline_scene();
    const PathSet paths = make_two_path(scene, testing::baseline_scenario(), 3);
    for (int i = 0; i < scene.subarray_count(); ++i) {
        const auto& p = paths.per_subarray[i];
        REQUIRE(p.size() == 2);
        CHECK(p[1].dist == doctest::Approx(10.0 * p[0].dist).epsilon(1e-12));
        const double ratio_db = 20.0 * std::log10(std::abs(p[0].gain) / std::abs(p[1].gain));
        CHECK(ratio_db == doctest::Approx(20.0).epsilon(1e-10));
        CHECK(p[1].theta - p[0].theta == doctest::Approx(kPi / 4).epsilon(1e-12));
        const VecC h1 = farfield_channel({p[0]}, scene.subarrays[i], scene.wavelength);
        const VecC h2 = farfield_channel({p[1]}, scene.subarrays[i], scene.wavelength);
        CHECK(h2.norm() / h1.norm() == doctest::Approx(0.1).epsilon(1e-10));
    }
}

TEST_CASE("gain formula invariant") {
    const Scene scene = testing::baseline_scene();
    const PathSet paths = make_two_path(scene, testing::baseline_scenario(), 11);
    for (const auto& sub : paths.per_subarray)
        for (const PathEntry& p : sub) {
            const Cplx expected =
                std::polar(1.0, -2.0 * kPi * p.dist / scene.wavelength) / std::sqrt(p.pathloss);
            CHECK(std::abs(p.gain - expected) < 1e-15);
        }
}

TEST_CASE("delta_hat moments match the uniform law") {
    SubarrayConfig sub;
    sub.centroid = Vec3(2.0, 4.6, 5.4);
    const Scene scene = make_scene(Vec3::Zero(), {sub}, 28.0);
    ScenarioConfig cfg = testing::baseline_scenario();
    cfg.delta = 0.5;
    cfg.delta_spread = 0.2;
    const double truth_theta = truth_angles(scene, 0).theta;
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < n; ++t) {
        const PathSet paths = make_two_path(scene, cfg, static_cast<std::uint64_t>(t));
        const double offset = paths.per_subarray[0][1].theta - truth_theta;
        sum += offset;
        sum_sq += offset * offset;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double sigma = cfg.delta_spread / std::sqrt(3.0);
    CHECK(std::abs(mean - cfg.delta) < 3.0 * sigma / std::sqrt(n));
    CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.02));
}

TEST_CASE("elevation clamp flagged") {
    SubarrayConfig sub;
    sub.centroid = Vec3(-1.0, 0.0, -10.0); // MS far above: LoS phi near +pi/2
    const Scene scene = make_scene(Vec3::Zero(), {sub}, 28.0);
    ScenarioConfig cfg = testing::baseline_scenario();
    cfg.delta = 1.0;
    const PathSet paths = make_two_path(scene, cfg, 0);
    CHECK(paths.per_subarray[0][1].phi_clamped);
    CHECK(paths.per_subarray[0][1].phi == doctest::Approx(kPi / 2));
}

TEST_CASE("nearfield converges to farfield and monotonically so") {
    SubarrayConfig sub;
    sub.elements_y = 4;
    sub.elements_z = 4;
    Scene scene = make_scene(Vec3(100.0, 0, 0), {sub}, 28.0);
    // aperture = diagonal extent of the 4x4 grid
    const double aperture = std::hypot(3 * scene.subarrays[0].spacing_y,
                                       3 * scene.subarrays[0].spacing_z);
    const double theta = -2.1, phi = -0.7;
    double last = 1e9;
    for (double mult : {1e2, 1e3, 1e4}) {
        const double d = mult * aperture;
        PathEntry p;
        p.theta = theta;
        p.phi = phi;
        p.dist = d;
        p.pathloss = pathloss(d, scene.carrier_freq_ghz);
        p.gain = std::polar(1.0 / std::sqrt(p.pathloss), -2.0 * kPi * d / scene.wavelength);
        const VecC nf = nearfield_channel(scene, 0, {p});
        const VecC ff = farfield_channel({p}, scene.subarrays[0], scene.wavelength);
        const double err = aligned_phase_error(ff, nf);
        CHECK(err < last);
        last = err;
        if (mult == 1e4)
            CHECK(err < 1e-2);
    }
}

TEST_CASE("nearfield single element has the reference phase") {
    SubarrayConfig sub;
    sub.elements_y = 1;
    sub.elements_z = 1;
    sub.centroid = Vec3(5.0, 1.0, 2.0);
    const Scene scene = make_scene(Vec3::Zero(), {sub}, 28.0);
    const PathSet paths = make_two_path(scene, [] {
        ScenarioConfig c;
        c.num_paths = 1;
        return c;
    }(), 0);
    const VecC h = nearfield_channel(scene, 0, paths.per_subarray[0]);
    // One element at the centroid: exactly the path gain, no extra phase.
    CHECK(std::abs(h(0) - paths.per_subarray[0][0].gain) < 1e-15);
}

TEST_CASE("kronecker structure: single-path far field is rank 1 when reshaped") {
    const Scene scene = testing::baseline_scene();
    Rng rng(23);
    for (int n = 0; n < 20; ++n) {
        PathEntry p;
        p.theta = rng.uniform(-kPi, kPi);
        p.phi = rng.uniform(-kPi / 2, kPi / 2);
        p.dist = rng.uniform(2.0, 50.0);
        p.pathloss = pathloss(p.dist, scene.carrier_freq_ghz);
        p.gain = std::polar(1.0 / std::sqrt(p.pathloss), rng.uniform(0.0, 2 * kPi));
        const VecC h = farfield_channel({p}, scene.subarrays[0], scene.wavelength);
        Eigen::Map<const MatC> matrix(h.data(), 4, 4); // z fast axis
        Eigen::JacobiSVD<MatC> svd(matrix);
        CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
    }
}

TEST_CASE("nearfield rejects a source on top of an element") {
    SubarrayConfig sub;
    sub.elements_y = 1;
    sub.elements_z = 1; // sole element sits exactly at the centroid
    const Scene scene = make_scene(Vec3(5, 5, 5), {sub}, 28.0);
    PathEntry p;
    p.theta = 0.0;
    p.phi = 0.0;
    p.dist = 1e-12; // collapses onto that element
    p.gain = Cplx(1.0, 0.0);
    p.pathloss = 1.0;
    CHECK_THROWS_AS(nearfield_channel(scene, 0, {p}), std::domain_error);
}
