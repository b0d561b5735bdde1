// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rris/io.hpp"
#include "test_helpers.hpp"

using namespace rris;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path((std::filesystem::temp_directory_path() / name).string()) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("defaults cover the baseline setup") {
    TempFile cfg("rris_cfg_min.json", "{}");
    const RunConfig config = load_config(cfg.path);
    CHECK(config.context.carrier_freq_ghz == 28.0);
    CHECK(config.context.pattern.label == "2x2");
    CHECK(config.context.elements_y == 4);
    CHECK(config.context.slots == 32);
    CHECK(config.context.bandwidth_mhz == 10.0);
    CHECK(config.context.scenario.delta == doctest::Approx(kPi / 4));
    const Scene scene = config.context.build_scene();
    CHECK(scene.subarray_count() == 4);
    CHECK((scene.subarrays[0].centroid - Vec3(2, 4.6, 5.4)).norm() < 1e-12);
}

TEST_CASE("unknown keys are hard errors with a path") {
    TempFile cfg("rris_cfg_bad.json", R"({"waveform": {"k_sots": 32}})");
    try {
        load_config(cfg.path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("k_sots") != std::string::npos);
        CHECK(what.find("waveform") != std::string::npos);
    }
}

TEST_CASE("empty sweep values are rejected") {
    TempFile cfg("rris_cfg_empty.json", R"({"sweep": {"variable": "tx_power", "values": []}})");
    CHECK_THROWS_AS(load_config(cfg.path), ConfigError);
}

TEST_CASE("bad enum values are rejected") {
    TempFile a("rris_cfg_e1.json", R"({"waveform": {"combiner": "fourier"}})");
    CHECK_THROWS_AS(load_config(a.path), ConfigError);
    TempFile b("rris_cfg_e2.json", R"({"sweep": {"estimator": "magic"}})");
    CHECK_THROWS_AS(load_config(b.path), ConfigError);
    TempFile c("rris_cfg_e3.json", R"({"scenario": {"num_paths": 3}})");
    CHECK_THROWS_AS(load_config(c.path), ConfigError);
}

TEST_CASE("full config round trip") {
    TempFile cfg("rris_cfg_full.json", R"({
        "scene": {
            "ms_position_m": [0, 0, 0],
            "carrier_freq_ghz": 28,
            "pattern": {"name": "1x4", "centroid_m": [2, 5, 5], "v_spacing_m": 0.8,
                        "h_spacing_m": 0.8},
            "subarray": {"elements_y": 4, "elements_z": 4}
        },
        "scenario": {"num_paths": 2, "delta_rad": 0.7853981633974483,
                     "delta_spread_rad": 0, "power_ratio_db": 20},
        "waveform": {"bandwidth_mhz": 10, "combiner": "dft", "k_slots": [16, 32],
                     "tx_power_dbm": 20},
        "sweep": {"variable": "tx_power", "values": [0, 10, 20], "trials": 5,
                  "base_seed": 9, "estimator": "crlb_only"},
        "anm": {"mu_scale": 2.0, "rho": 1.0, "eps_abs": 1e-6, "eps_rel": 1e-5,
                "max_iter": 4000},
        "omp": {"grid_y": 256, "grid_z": 256, "sparsity": 2},
        "output": {"dir": "results"}
    })");
    const RunConfig config = load_config(cfg.path);
    CHECK(config.context.pattern.label == "1x4");
    CHECK(config.k_series == std::vector<int>{16, 32});
    CHECK(config.sweep.values.size() == 3);
    CHECK(config.sweep.estimator == Estimator::CrlbOnly);
    CHECK(config.sweep.base_seed == 9);
    CHECK(config.context.anm_opts.max_iter == 4000);
    CHECK(config.context.omp_grid.grid_y == 256);
    CHECK(config.output_dir == "results");
    const Scene scene = config.context.build_scene();
    CHECK(scene.subarrays[0].centroid.z() == doctest::Approx(6.2));
}

TEST_CASE("scene serialization round trip") {
    const Scene scene = testing::baseline_scene();
    const std::string text = scene_to_json(scene);
    const Scene back = scene_from_json_text(text);
    REQUIRE(back.subarray_count() == scene.subarray_count());
    CHECK((back.ms_position - scene.ms_position).norm() == 0.0);
    CHECK(back.wavelength == doctest::Approx(scene.wavelength).epsilon(1e-15));
    for (int i = 0; i < scene.subarray_count(); ++i) {
        CHECK((back.subarrays[i].centroid - scene.subarrays[i].centroid).norm() == 0.0);
        CHECK(back.subarrays[i].spacing_y ==
              doctest::Approx(scene.subarrays[i].spacing_y).epsilon(1e-15));
    }
}

TEST_CASE("scene file reference resolves relative to the config") {
    TempFile scene_file("rris_scene_ref.json", R"({
        "ms_position_m": [0, 0, 0],
        "carrier_freq_ghz": 28,
        "pattern": {"name": "4x1", "centroid_m": [2, 7, 2]}
    })");
    TempFile cfg("rris_cfg_ref.json",
                 std::string(R"({"scene_file": "rris_scene_ref.json"})"));
    const RunConfig config = load_config(cfg.path);
    CHECK(config.context.pattern.label == "4x1");
    CHECK((config.context.pattern.centroid - Vec3(2, 7, 2)).norm() == 0.0);
}

TEST_CASE("csv writer emits header and full-precision values") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "rris_csv_test.csv").string();
    write_csv(path, {"a", "b"}, {{format_double(1.0 / 3.0), format_double(2.0)}});
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "a,b");
    CHECK(row.find("0.3333333333333333") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("manifest echoes the config") {
    TempFile cfg("rris_cfg_manifest.json", R"({"sweep": {"trials": 7}})");
    RunConfig config = load_config(cfg.path);
    const std::string path =
        (std::filesystem::temp_directory_path() / "rris_manifest_test.json").string();
    write_manifest(path, R"({"sweep": {"trials": 7}})", config, "simulate", {"note-1"});
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("\"command\": \"simulate\"") != std::string::npos);
    CHECK(all.find("\"trials\": 7") != std::string::npos);
    CHECK(all.find("note-1") != std::string::npos);
    CHECK(all.find("subarrays") != std::string::npos);
    std::remove(path.c_str());
}
