// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rris/experiments.hpp"
#include "test_helpers.hpp"

using namespace rris;

namespace {

ExperimentContext small_context() {
    ExperimentContext ctx;
    ctx.pattern = {"2x2", Vec3(2, 5, 5)};
    ctx.scenario = testing::baseline_scenario();
    ctx.slots = 16;
    ctx.omp_grid = {129, 129}; // keep unit tests fast
    return ctx;
}

} // namespace

TEST_CASE("crlb_only sweep equals peb pointwise") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::TxPower;
    spec.values = {0.0, 10.0, 20.0};
    spec.trials = 1;
    spec.estimator = Estimator::CrlbOnly;
    const auto records = run_sweep(spec, ctx);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double direct =
            context_peb(ctx.build_scene(), ctx, spec.values[i], ctx.slots);
        CHECK(records[i].rmse_m == records[i].crlb_m);
        CHECK(records[i].crlb_m == doctest::Approx(direct).epsilon(1e-12));
    }
    // PEB scales as 1/sqrt(P): +10 dB is a sqrt(10) factor.
    CHECK(records[0].crlb_m / records[1].crlb_m ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-6));
}

TEST_CASE("run_sweep is deterministic and independent of worker count") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::TxPower;
    spec.values = {20.0};
    spec.trials = 6;
    spec.base_seed = 5;
    const auto one = run_sweep(spec, ctx);
    ctx.threads = 3;
    const auto three = run_sweep(spec, ctx);
    ctx.threads = 1;
    const auto again = run_sweep(spec, ctx);
    CHECK(one[0].rmse_m == three[0].rmse_m);
    CHECK(one[0].rmse_m == again[0].rmse_m);
    CHECK(one[0].fail_rate == three[0].fail_rate);
}

TEST_CASE("different base seeds give different noise realizations") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::TxPower;
    spec.values = {0.0};
    spec.trials = 4;
    spec.base_seed = 5;
    const auto a = run_sweep(spec, ctx);
    spec.base_seed = 6;
    const auto b = run_sweep(spec, ctx);
    CHECK(a[0].rmse_m != b[0].rmse_m);
}

TEST_CASE("anm trial at high power localizes to centimeters") {
    ExperimentContext ctx = small_context();
    ctx.slots = 32;
    const Scene scene = ctx.build_scene();
    const TrialResult r = run_trial(scene, ctx, 20.0, 32, Estimator::AnmMusic, 123);
    REQUIRE(r.ok);
    CHECK(r.error_m < 0.05);
}

TEST_CASE("omp trial localizes and stays above the quantization floor") {
    ExperimentContext ctx = small_context();
    ctx.omp_grid = {513, 513};
    const Scene scene = ctx.build_scene();
    const TrialResult r = run_trial(scene, ctx, 20.0, 32, Estimator::Omp, 9);
    REQUIRE(r.ok);
    CHECK(r.error_m < 1.0);
    CHECK(r.error_m > 1e-4);
}

TEST_CASE("slots sweep orders the bound") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::Slots;
    spec.values = {16, 32, 64};
    spec.estimator = Estimator::CrlbOnly;
    const auto records = run_sweep(spec, ctx);
    CHECK(records[0].crlb_m > records[1].crlb_m);
    CHECK(records[1].crlb_m > records[2].crlb_m);
}

TEST_CASE("subarray spacing sweep rebuilds the scene") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::SubarraySpacing;
    spec.values = {0.2, 1.2};
    spec.estimator = Estimator::CrlbOnly;
    const auto records = run_sweep(spec, ctx);
    // Wider separation means better conditioned fusion geometry.
    CHECK(records[1].crlb_m < records[0].crlb_m);
}

TEST_CASE("pattern sweep labels and values") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::PartitionPattern;
    spec.patterns = {{"2x2", Vec3(2, 5, 5)}, {"1x4", Vec3(2, 5, 5)}};
    spec.estimator = Estimator::CrlbOnly;
    const auto records = run_sweep(spec, ctx);
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == "2x2");
    CHECK(records[1].label == "1x4");
    CHECK(records[0].value == 0.0);
    CHECK(records[1].value == 1.0);
}

TEST_CASE("ms position grid sweep reports the LoS distance") {
    ExperimentContext ctx = small_context();
    SweepSpec spec;
    spec.variable = SweepVariable::MsPositionGrid;
    spec.ms_positions = {Vec3(0, 2, 2), Vec3(0, 8, 1)};
    spec.estimator = Estimator::CrlbOnly;
    const auto records = run_sweep(spec, ctx);
    REQUIRE(records.size() == 2);
    const Scene base = ctx.build_scene();
    CHECK(records[0].value ==
          doctest::Approx((Vec3(0, 2, 2) - base.subarrays[0].centroid).norm()));
}

TEST_CASE("heatmap PEB worsens near the subarray plane z") {
    ExperimentContext ctx = small_context();
    ctx.slots = 32;
    ctx.tx_power_dbm = -20.0;
    HeatmapSpec spec;
    spec.y_min = spec.y_max = 1.0;
    spec.z_min = 3.0;
    spec.z_max = 7.0;
    spec.step = 2.0; // z in {3, 5, 7}
    const auto cells = heatmap(spec, ctx);
    REQUIRE(cells.size() == 3);
    CHECK(cells[1].z == doctest::Approx(5.0));
    CHECK(cells[1].peb_m > cells[0].peb_m);
    CHECK(cells[1].peb_m > cells[2].peb_m);
    for (const auto& c : cells)
        CHECK(c.rmse_m < 0.0); // RMSE disabled by default
}

TEST_CASE("single-subarray error bound grows quadratically with distance") {
    // Per subarray: path loss costs d^2 in the angle bounds and the
    // Jacobian another d^2, so the error-variance identity scales ~d^4
    // (RMSE ~d^2). The fused multi-subarray PEB picks up one more distance
    // power from the shrinking parallax and goes ~d^3; the quadratic law is
    // a per-anchor statement.
    ExperimentContext ctx = small_context();
    ctx.slots = 32;
    const Vec3 centroid(2, 5, 5);
    const Vec3 dir = (Vec3(0, 1, 1) - centroid).normalized();
    SubarrayConfig sub;
    sub.centroid = centroid;
    const MatC w = dft_combiner(16, 32);
    std::vector<double> dist, rmse_bound;
    for (double t : {6.0, 9.0, 13.5}) {
        const Scene scene = make_scene(centroid + t * dir, {sub}, 28.0);
        const PathSet paths = make_two_path(scene, ctx.scenario, 0);
        const auto mp =
            mu_partials(paths.per_subarray[0], scene.subarrays[0], w, scene.wavelength);
        const LosBound bound = los_bound(mp, -20.0, ctx.noise_var_dbm());
        const TruthAngles truth = truth_angles(scene, 0);
        dist.push_back(t);
        rmse_bound.push_back(std::sqrt(
            error_decomposition(bound.eps_theta, bound.eps_phi, truth.dist, truth.phi)));
    }
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
        const double exponent = std::log(rmse_bound[i + 1] / rmse_bound[i]) /
                                std::log(dist[i + 1] / dist[i]);
        CHECK(exponent == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("no-fix trials are excluded from RMSE and counted") {
    // A single-subarray scene cannot fix a position: every trial fails.
    ExperimentContext ctx = small_context();
    ctx.pattern = {"1x1", Vec3(2, 5, 5)};
    SweepSpec spec;
    spec.variable = SweepVariable::TxPower;
    spec.values = {20.0};
    spec.trials = 3;
    const auto records = run_sweep(spec, ctx);
    CHECK(records[0].fail_rate == doctest::Approx(1.0));
    CHECK(std::isinf(records[0].rmse_m));
}
