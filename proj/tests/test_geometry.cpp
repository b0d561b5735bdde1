// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rris/geometry.hpp"
#include "rris/rng.hpp"
#include "test_helpers.hpp"

using namespace rris;

TEST_CASE("truth_angles broadside along -x") {
    const auto a = truth_angles(Vec3(-3.0, 0.0, 0.0), Vec3::Zero());
    CHECK(a.theta == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(a.phi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a.dist == doctest::Approx(3.0));
    CHECK_FALSE(a.zenith);
}

TEST_CASE("truth_angles zenith singularity flagged") {
    const auto a = truth_angles(Vec3(0.0, 0.0, 2.0), Vec3::Zero());
    CHECK(a.phi == doctest::Approx(kPi / 2.0));
    CHECK(a.zenith);
}

TEST_CASE("truth_angles first baseline subarray") {
    const auto a = truth_angles(Vec3::Zero(), Vec3(2.0, 4.6, 5.4));
    const double d = std::sqrt(54.32);
    CHECK(a.dist == doctest::Approx(d).epsilon(1e-12));
    const Vec3 xi = (Vec3::Zero() - Vec3(2.0, 4.6, 5.4)) / d;
    CHECK(a.theta == doctest::Approx(std::atan2(xi.y(), xi.x())).epsilon(1e-12));
    CHECK(a.phi == doctest::Approx(std::asin(xi.z())).epsilon(1e-12));
}

TEST_CASE("truth_angles rejects coincident points") {
    CHECK_THROWS_AS(truth_angles(Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0)), std::domain_error);
}

TEST_CASE("round trip over random scenes") {
    Rng rng(7);
    for (int n = 0; n < 1000; ++n) {
        const Vec3 centroid(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
        Vec3 ms(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
        if ((ms - centroid).norm() < 1e-3)
            ms.x() += 1.0;
        const auto a = truth_angles(ms, centroid);
        const Vec3 rebuilt = centroid + a.dist * bearing_from_angles(a.theta, a.phi);
        CHECK((rebuilt - ms).norm() < 1e-12 * std::max(1.0, ms.norm()));
    }
}

TEST_CASE("build_partition 2x2 reproduces the four baseline centroids") {
    PartitionPattern p;
    p.rows = 2;
    p.cols = 2;
    p.v_spacing = 0.8;
    p.h_spacing = 0.8;
    p.centroid = Vec3(2.0, 5.0, 5.0);
    const auto subs = build_partition(p, 4, 4);
    REQUIRE(subs.size() == 4);
    CHECK((subs[0].centroid - Vec3(2.0, 4.6, 5.4)).norm() < 1e-12);
    CHECK((subs[1].centroid - Vec3(2.0, 4.6, 4.6)).norm() < 1e-12);
    CHECK((subs[2].centroid - Vec3(2.0, 5.4, 5.4)).norm() < 1e-12);
    CHECK((subs[3].centroid - Vec3(2.0, 5.4, 4.6)).norm() < 1e-12);
}

TEST_CASE("build_partition 1x1 and 1x4") {
    PartitionPattern single;
    single.rows = 1;
    single.cols = 1;
    single.centroid = Vec3(1.0, 2.0, 3.0);
    const auto one = build_partition(single, 4, 4);
    REQUIRE(one.size() == 1);
    CHECK((one[0].centroid - single.centroid).norm() == 0.0);

    const auto vertical = build_partition(parse_pattern_label("1x4", Vec3(2, 5, 5)), 4, 4);
    REQUIRE(vertical.size() == 4);
    CHECK(vertical[0].centroid.z() == doctest::Approx(6.2));
    CHECK(vertical[1].centroid.z() == doctest::Approx(5.4));
    CHECK(vertical[2].centroid.z() == doctest::Approx(4.6));
    CHECK(vertical[3].centroid.z() == doctest::Approx(3.8));
    for (const auto& s : vertical)
        CHECK(s.centroid.y() == doctest::Approx(5.0));
}

TEST_CASE("partition centroids symmetric about pattern centroid") {
    Rng rng(3);
    for (int n = 0; n < 50; ++n) {
        PartitionPattern p;
        p.rows = 1 + static_cast<int>(rng.next_u64() % 4);
        p.cols = 1 + static_cast<int>(rng.next_u64() % 4);
        p.v_spacing = rng.uniform(0.1, 2.0);
        p.h_spacing = rng.uniform(0.1, 2.0);
        p.centroid = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        const auto subs = build_partition(p, 2, 2);
        Vec3 mean = Vec3::Zero();
        for (const auto& s : subs)
            mean += s.centroid;
        mean /= static_cast<double>(subs.size());
        CHECK((mean - p.centroid).norm() < 1e-12);
    }
}

TEST_CASE("gdop golden values") {
    CHECK(gdop(testing::pattern_scene("2x2", Vec3(2, 5, 5))) == doctest::Approx(34.7729).epsilon(3e-5));
    CHECK(gdop(testing::pattern_scene("1x4", Vec3(2, 5, 5))) == doctest::Approx(5.5910).epsilon(2e-4));
    CHECK(gdop(testing::pattern_scene("4x1", Vec3(2, 7, 2))) == doctest::Approx(11.0305).epsilon(1e-4));
    CHECK(gdop(testing::pattern_scene("4x1", Vec3(2, 2, 7))) == doctest::Approx(4.4438).epsilon(2e-4));
    CHECK(gdop(testing::pattern_scene("2x2", Vec3(2, 2, 7))) == doctest::Approx(36.7671).epsilon(3e-5));
}

TEST_CASE("gdop scaling invariance with MS at origin") {
    const Scene base = testing::baseline_scene();
    for (double scale : {0.5, 2.0, 7.5}) {
        std::vector<SubarrayConfig> scaled = base.subarrays;
        for (auto& s : scaled)
            s.centroid *= scale;
        const Scene scene = make_scene(Vec3::Zero(), scaled, base.carrier_freq_ghz);
        CHECK(gdop(scene) == doctest::Approx(gdop(base)).epsilon(1e-10));
    }
}

TEST_CASE("gdop line-pattern symmetry at y = z centroid") {
    const double vertical = gdop(testing::pattern_scene("1x4", Vec3(2, 5, 5)));
    const double horizontal = gdop(testing::pattern_scene("4x1", Vec3(2, 5, 5)));
    CHECK(vertical == doctest::Approx(horizontal).epsilon(1e-12));
}

TEST_CASE("single subarray gdop finite via pseudo-inverse") {
    const Scene scene = testing::pattern_scene("1x1", Vec3(2, 5, 5));
    const double g = gdop(scene);
    CHECK(std::isfinite(g));
    CHECK(g > 0.0);
}

TEST_CASE("make_scene validation") {
    CHECK_THROWS_AS(make_scene(Vec3::Zero(), {}, 28.0), std::invalid_argument);
    SubarrayConfig a;
    a.centroid = Vec3(1, 1, 1);
    CHECK_THROWS_AS(make_scene(Vec3::Zero(), {a, a}, 28.0), std::invalid_argument);
    const Scene s = make_scene(Vec3::Zero(), {a}, 28.0);
    CHECK(s.wavelength == doctest::Approx(kSpeedOfLight / 28e9));
    CHECK(s.subarrays[0].spacing_y == doctest::Approx(0.5 * s.wavelength));
}
