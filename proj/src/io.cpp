// SPDX-License-Identifier: Apache-2.0
#include "rris/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rris {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
}

double number_at(const json& obj, const std::string& where, const std::string& key,
                 double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required)
            throw ConfigError(where + ": missing \"" + key + "\"");
        return fallback;
    }
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

Vec3 vec3_at(const json& obj, const std::string& where, const std::string& key,
             const Vec3& fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj[key];
    if (!v.is_array() || v.size() != 3 || !v[0].is_number())
        throw ConfigError(where + "." + key + ": expected [x, y, z]");
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

PatternChoice pattern_at(const json& obj, const std::string& where) {
    require_keys(obj, where, {"name", "centroid_m", "v_spacing_m", "h_spacing_m"});
    PatternChoice choice;
    if (!obj.contains("name") || !obj["name"].is_string())
        throw ConfigError(where + ": pattern needs a string \"name\"");
    choice.label = obj["name"].get<std::string>();
    choice.centroid = vec3_at(obj, where, "centroid_m", Vec3(2.0, 5.0, 5.0));
    return choice;
}

void parse_scene_block(const json& scene, const std::string& where, RunConfig& out) {
    require_keys(scene, where,
                 {"ms_position_m", "carrier_freq_ghz", "pattern", "subarray"});
    ExperimentContext& ctx = out.context;
    ctx.ms_position = vec3_at(scene, where, "ms_position_m", Vec3::Zero());
    ctx.carrier_freq_ghz = number_at(scene, where, "carrier_freq_ghz", 28.0);
    if (ctx.carrier_freq_ghz <= 0.0)
        throw ConfigError(where + ".carrier_freq_ghz: must be positive");
    if (scene.contains("pattern")) {
        const json& p = scene["pattern"];
        ctx.pattern = pattern_at(p, where + ".pattern");
        ctx.v_spacing = number_at(p, where + ".pattern", "v_spacing_m", 0.8);
        ctx.h_spacing = number_at(p, where + ".pattern", "h_spacing_m", 0.8);
        if (ctx.v_spacing <= 0.0 || ctx.h_spacing <= 0.0)
            throw ConfigError(where + ".pattern: spacings must be positive");
    }
    if (scene.contains("subarray")) {
        const json& s = scene["subarray"];
        require_keys(s, where + ".subarray", {"elements_y", "elements_z"});
        ctx.elements_y = static_cast<int>(number_at(s, where + ".subarray", "elements_y", 4));
        ctx.elements_z = static_cast<int>(number_at(s, where + ".subarray", "elements_z", 4));
        if (ctx.elements_y < 1 || ctx.elements_z < 1)
            throw ConfigError(where + ".subarray: element counts must be >= 1");
    }
}

} // namespace

RunConfig load_config(const std::string& path) {
    const json j = load_json_file(path);
    require_keys(j, "config",
                 {"scene", "scene_file", "scenario", "waveform", "sweep", "anm", "omp",
                  "heatmap", "gdop", "crlb", "output"});
    RunConfig out;
    ExperimentContext& ctx = out.context;

    if (j.contains("scene") && j.contains("scene_file"))
        throw ConfigError("config: give either \"scene\" or \"scene_file\", not both");
    if (j.contains("scene_file")) {
        if (!j["scene_file"].is_string())
            throw ConfigError("config.scene_file: expected a path string");
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        const std::string scene_path = (base / j["scene_file"].get<std::string>()).string();
        parse_scene_block(load_json_file(scene_path), "scene_file", out);
    } else if (j.contains("scene")) {
        parse_scene_block(j["scene"], "scene", out);
    }

    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        require_keys(s, "scenario",
                     {"num_paths", "delta_rad", "delta_spread_rad", "power_ratio_db"});
        ctx.scenario.num_paths = static_cast<int>(number_at(s, "scenario", "num_paths", 2));
        ctx.scenario.delta = number_at(s, "scenario", "delta_rad", kPi / 4.0);
        ctx.scenario.delta_spread = number_at(s, "scenario", "delta_spread_rad", 0.0);
        ctx.scenario.power_ratio_db = number_at(s, "scenario", "power_ratio_db", 20.0);
        if (ctx.scenario.num_paths < 1 || ctx.scenario.num_paths > 2)
            throw ConfigError("scenario.num_paths: must be 1 or 2");
        if (ctx.scenario.delta_spread < 0.0)
            throw ConfigError("scenario.delta_spread_rad: must be >= 0");
        if (ctx.scenario.power_ratio_db < 0.0)
            throw ConfigError("scenario.power_ratio_db: must be >= 0");
    }

    if (j.contains("waveform")) {
        const json& w = j["waveform"];
        require_keys(w, "waveform", {"bandwidth_mhz", "combiner", "k_slots", "tx_power_dbm"});
        ctx.bandwidth_mhz = number_at(w, "waveform", "bandwidth_mhz", 10.0);
        if (ctx.bandwidth_mhz <= 0.0)
            throw ConfigError("waveform.bandwidth_mhz: must be positive");
        if (w.contains("combiner")) {
            const std::string kind = w["combiner"].get<std::string>();
            if (kind == "dft")
                ctx.combiner = CombinerKind::Dft;
            else if (kind == "random_phase")
                ctx.combiner = CombinerKind::RandomPhase;
            else
                throw ConfigError("waveform.combiner: expected \"dft\" or \"random_phase\"");
        }
        if (w.contains("k_slots") && w["k_slots"].is_array()) {
            for (const auto& k : w["k_slots"]) {
                if (!k.is_number() || k.get<double>() < 1)
                    throw ConfigError("waveform.k_slots: entries must be numbers >= 1");
                out.k_series.push_back(static_cast<int>(k.get<double>()));
            }
            if (out.k_series.empty())
                throw ConfigError("waveform.k_slots: list must not be empty");
            ctx.slots = out.k_series.front();
        } else {
            ctx.slots = static_cast<int>(number_at(w, "waveform", "k_slots", 32));
            if (ctx.slots < 1)
                throw ConfigError("waveform.k_slots: must be >= 1");
        }
        ctx.tx_power_dbm = number_at(w, "waveform", "tx_power_dbm", 20.0);
    }

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        require_keys(s, "sweep",
                     {"variable", "values", "ms_positions_m", "patterns", "trials",
                      "base_seed", "estimator"});
        if (s.contains("variable")) {
            const std::string v = s["variable"].get<std::string>();
            if (v == "tx_power")
                out.sweep.variable = SweepVariable::TxPower;
            else if (v == "k_slots")
                out.sweep.variable = SweepVariable::Slots;
            else if (v == "ms_position_grid")
                out.sweep.variable = SweepVariable::MsPositionGrid;
            else if (v == "subarray_spacing")
                out.sweep.variable = SweepVariable::SubarraySpacing;
            else if (v == "partition_pattern")
                out.sweep.variable = SweepVariable::PartitionPattern;
            else
                throw ConfigError("sweep.variable: unknown variable \"" + v + "\"");
        }
        if (s.contains("values")) {
            if (!s["values"].is_array())
                throw ConfigError("sweep.values: expected an array of numbers");
            for (const auto& v : s["values"]) {
                if (!v.is_number())
                    throw ConfigError("sweep.values: expected numbers");
                out.sweep.values.push_back(v.get<double>());
            }
            if (out.sweep.values.empty())
                throw ConfigError("sweep.values: empty sweep list");
        }
        if (s.contains("ms_positions_m")) {
            for (const auto& v : s["ms_positions_m"]) {
                if (!v.is_array() || v.size() != 3)
                    throw ConfigError("sweep.ms_positions_m: expected [x, y, z] entries");
                out.sweep.ms_positions.emplace_back(v[0].get<double>(), v[1].get<double>(),
                                                    v[2].get<double>());
            }
        }
        if (s.contains("patterns")) {
            for (const auto& p : s["patterns"])
                out.sweep.patterns.push_back(pattern_at(p, "sweep.patterns[]"));
        }
        out.sweep.trials = static_cast<int>(number_at(s, "sweep", "trials", 200));
        if (out.sweep.trials < 1)
            throw ConfigError("sweep.trials: must be >= 1");
        out.sweep.base_seed =
            static_cast<std::uint64_t>(number_at(s, "sweep", "base_seed", 1));
        if (s.contains("estimator")) {
            const std::string e = s["estimator"].get<std::string>();
            if (e == "anm_music")
                out.sweep.estimator = Estimator::AnmMusic;
            else if (e == "omp")
                out.sweep.estimator = Estimator::Omp;
            else if (e == "crlb_only")
                out.sweep.estimator = Estimator::CrlbOnly;
            else
                throw ConfigError("sweep.estimator: unknown estimator \"" + e + "\"");
        }
    }

    if (j.contains("anm")) {
        const json& a = j["anm"];
        require_keys(a, "anm", {"mu_scale", "rho", "eps_abs", "eps_rel", "max_iter"});
        ctx.mu_scale = number_at(a, "anm", "mu_scale", 1.0);
        ctx.anm_opts.rho = number_at(a, "anm", "rho", ctx.anm_opts.rho);
        ctx.anm_opts.eps_abs = number_at(a, "anm", "eps_abs", ctx.anm_opts.eps_abs);
        ctx.anm_opts.eps_rel = number_at(a, "anm", "eps_rel", ctx.anm_opts.eps_rel);
        ctx.anm_opts.max_iter =
            static_cast<int>(number_at(a, "anm", "max_iter", ctx.anm_opts.max_iter));
        if (ctx.mu_scale <= 0.0 || ctx.anm_opts.rho <= 0.0 || ctx.anm_opts.max_iter < 1)
            throw ConfigError("anm: mu_scale and rho must be positive, max_iter >= 1");
    }

    if (j.contains("omp")) {
        const json& o = j["omp"];
        require_keys(o, "omp", {"grid_y", "grid_z", "sparsity"});
        ctx.omp_grid.grid_y = static_cast<int>(number_at(o, "omp", "grid_y", 2048));
        ctx.omp_grid.grid_z = static_cast<int>(number_at(o, "omp", "grid_z", 2048));
        ctx.omp_sparsity = static_cast<int>(number_at(o, "omp", "sparsity", 2));
        if (ctx.omp_grid.grid_y < 2 || ctx.omp_grid.grid_z < 2 || ctx.omp_sparsity < 1)
            throw ConfigError("omp: grid axes must be >= 2 and sparsity >= 1");
    }

    if (j.contains("heatmap")) {
        const json& h = j["heatmap"];
        require_keys(h, "heatmap",
                     {"y_min_m", "y_max_m", "z_min_m", "z_max_m", "step_m", "with_rmse",
                      "trials", "base_seed"});
        out.heatmap.y_min = number_at(h, "heatmap", "y_min_m", 0.0);
        out.heatmap.y_max = number_at(h, "heatmap", "y_max_m", 10.0);
        out.heatmap.z_min = number_at(h, "heatmap", "z_min_m", 0.0);
        out.heatmap.z_max = number_at(h, "heatmap", "z_max_m", 10.0);
        out.heatmap.step = number_at(h, "heatmap", "step_m", 0.5);
        if (h.contains("with_rmse")) {
            if (!h["with_rmse"].is_boolean())
                throw ConfigError("heatmap.with_rmse: expected a boolean");
            out.heatmap.with_rmse = h["with_rmse"].get<bool>();
        }
        out.heatmap.trials = static_cast<int>(number_at(h, "heatmap", "trials", 20));
        out.heatmap.base_seed =
            static_cast<std::uint64_t>(number_at(h, "heatmap", "base_seed", 1));
        if (out.heatmap.step <= 0.0 || out.heatmap.trials < 1)
            throw ConfigError("heatmap: step must be positive and trials >= 1");
    }

    if (j.contains("crlb")) {
        const json& c = j["crlb"];
        require_keys(c, "crlb",
                     {"delta_min_rad", "delta_max_rad", "delta_count", "delta_spreads_rad"});
        out.crlb.delta_min = number_at(c, "crlb", "delta_min_rad", out.crlb.delta_min);
        out.crlb.delta_max = number_at(c, "crlb", "delta_max_rad", out.crlb.delta_max);
        out.crlb.delta_count =
            static_cast<int>(number_at(c, "crlb", "delta_count", out.crlb.delta_count));
        if (c.contains("delta_spreads_rad")) {
            out.crlb.delta_spreads.clear();
            for (const auto& v : c["delta_spreads_rad"]) {
                if (!v.is_number() || v.get<double>() < 0.0)
                    throw ConfigError("crlb.delta_spreads_rad: entries must be >= 0");
                out.crlb.delta_spreads.push_back(v.get<double>());
            }
        }
        if (out.crlb.delta_count < 1 || out.crlb.delta_max < out.crlb.delta_min)
            throw ConfigError("crlb: need delta_count >= 1 and delta_max >= delta_min");
        if (out.crlb.delta_spreads.empty())
            throw ConfigError("crlb.delta_spreads_rad: must not be empty");
    }

    if (j.contains("gdop")) {
        const json& g = j["gdop"];
        if (!g.is_object() || !g.contains("designs") || !g["designs"].is_array())
            throw ConfigError("gdop: expected {\"designs\": [pattern, ...]}");
        require_keys(g, "gdop", {"designs"});
        for (const auto& d : g["designs"])
            out.gdop_designs.push_back(pattern_at(d, "gdop.designs[]"));
        if (out.gdop_designs.empty())
            throw ConfigError("gdop.designs: must not be empty");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        require_keys(o, "output", {"dir"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string())
                throw ConfigError("output.dir: expected a string");
            out.output_dir = o["dir"].get<std::string>();
        }
    }

    return out;
}

std::string scene_to_json(const Scene& scene) {
    json j;
    j["ms_position_m"] = {scene.ms_position.x(), scene.ms_position.y(), scene.ms_position.z()};
    j["carrier_freq_ghz"] = scene.carrier_freq_ghz;
    j["wavelength_m"] = scene.wavelength;
    j["subarrays"] = json::array();
    for (const SubarrayConfig& s : scene.subarrays) {
        json sub;
        sub["centroid_m"] = {s.centroid.x(), s.centroid.y(), s.centroid.z()};
        sub["elements_y"] = s.elements_y;
        sub["elements_z"] = s.elements_z;
        sub["spacing_y_m"] = s.spacing_y;
        sub["spacing_z_m"] = s.spacing_z;
        j["subarrays"].push_back(sub);
    }
    return j.dump(2);
}

Scene scene_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene: ") + e.what());
    }
    require_keys(j, "scene",
                 {"ms_position_m", "carrier_freq_ghz", "wavelength_m", "subarrays"});
    if (!j.contains("subarrays") || !j["subarrays"].is_array() || j["subarrays"].empty())
        throw ConfigError("scene.subarrays: expected a non-empty array");
    std::vector<SubarrayConfig> subs;
    for (const auto& s : j["subarrays"]) {
        require_keys(s, "scene.subarrays[]",
                     {"centroid_m", "elements_y", "elements_z", "spacing_y_m", "spacing_z_m"});
        SubarrayConfig sub;
        sub.centroid = vec3_at(s, "scene.subarrays[]", "centroid_m", Vec3::Zero());
        sub.elements_y = static_cast<int>(number_at(s, "scene.subarrays[]", "elements_y", 4));
        sub.elements_z = static_cast<int>(number_at(s, "scene.subarrays[]", "elements_z", 4));
        sub.spacing_y = number_at(s, "scene.subarrays[]", "spacing_y_m", 0.0);
        sub.spacing_z = number_at(s, "scene.subarrays[]", "spacing_z_m", 0.0);
        subs.push_back(sub);
    }
    const double f = number_at(j, "scene", "carrier_freq_ghz", 28.0, true);
    return make_scene(vec3_at(j, "scene", "ms_position_m", Vec3::Zero()), subs, f);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::runtime_error("write_csv: row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
}

void write_manifest(const std::string& path, const std::string& config_echo,
                    const RunConfig& config, const std::string& command,
                    const std::vector<std::string>& extra_lines) {
    json j;
    j["tool"] = "rris";
    j["version"] = "1.0.0";
    j["command"] = command;
    j["output_dir"] = config.output_dir;
    j["base_seed"] = config.sweep.base_seed;
    j["trials"] = config.sweep.trials;
    j["threads"] = config.context.threads;
    try {
        j["config"] = json::parse(config_echo);
    } catch (const json::parse_error&) {
        j["config"] = config_echo;
    }
    j["scene"] = json::parse(scene_to_json(config.context.build_scene()));
    for (std::size_t i = 0; i < extra_lines.size(); ++i)
        j["notes"].push_back(extra_lines[i]);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_manifest: cannot open " + path);
    out << j.dump(2) << '\n';
}

} // namespace rris
