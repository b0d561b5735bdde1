// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: crlb | simulate | gdop | heatmap subcommands over a JSON
// config. Exit codes: 0 ok, 2 config error, 3 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rris/io.hpp"
#include "rris/music.hpp"

namespace fs = std::filesystem;
using namespace rris;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int threads = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig resolve(const CommonArgs& args) {
    RunConfig config = load_config(args.config_path);
    if (!args.out_dir.empty())
        config.output_dir = args.out_dir;
    if (args.seed_set) {
        config.sweep.base_seed = args.seed;
        config.heatmap.base_seed = args.seed;
    }
    if (args.trials > 0) {
        config.sweep.trials = args.trials;
        config.heatmap.trials = args.trials;
    }
    if (args.threads > 0)
        config.context.threads = args.threads;
    fs::create_directories(config.output_dir);
    return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
}

int cmd_crlb(const CommonArgs& args) {
    const RunConfig config = resolve(args);
    const Scene scene = config.context.build_scene();
    const int m = config.context.elements_y * config.context.elements_z;
    const MatC combiner = config.context.combiner == CombinerKind::Dft
                              ? dft_combiner(m, config.context.slots)
                              : random_phase_combiner(m, config.context.slots,
                                                      config.sweep.base_seed);
    std::vector<double> grid(config.crlb.delta_count);
    for (int i = 0; i < config.crlb.delta_count; ++i)
        grid[i] = config.crlb.delta_count == 1
                      ? config.crlb.delta_min
                      : config.crlb.delta_min +
                            (config.crlb.delta_max - config.crlb.delta_min) * i /
                                (config.crlb.delta_count - 1);

    std::vector<std::vector<std::string>> rows;
    for (double spread : config.crlb.delta_spreads) {
        const auto curve = nlos_effect_curve(scene, grid, spread, combiner,
                                             config.context.tx_power_dbm,
                                             config.context.noise_var_dbm(),
                                             config.context.scenario.power_ratio_db);
        for (const auto& pt : curve) {
            ExperimentContext ctx = config.context;
            ctx.scenario.num_paths = 2;
            ctx.scenario.delta = pt.delta;
            ctx.scenario.delta_spread = 0.0;
            const double peb_m =
                context_peb(scene, ctx, config.context.tx_power_dbm, config.context.slots);
            rows.push_back({format_double(pt.delta), format_double(spread),
                            format_double(pt.theta_bound), format_double(pt.phi_bound),
                            format_double(pt.theta_single), format_double(pt.phi_single),
                            format_double(peb_m)});
        }
    }
    write_csv(out_path(config, "crlb_curves.csv"),
              {"delta_rad", "delta_spread_rad", "theta_bound_rad2", "phi_bound_rad2",
               "theta_single_rad2", "phi_single_rad2", "peb_m"},
              rows);
    write_manifest(out_path(config, "manifest.json"), slurp(args.config_path), config, "crlb");
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig config = resolve(args);
    std::vector<int> series = config.k_series;
    if (series.empty() || config.sweep.variable == SweepVariable::Slots)
        series = {config.context.slots};

    std::vector<std::vector<std::string>> rows;
    const char* var_name = [&] {
        switch (config.sweep.variable) {
        case SweepVariable::TxPower: return "tx_power_dbm";
        case SweepVariable::Slots: return "k_slots";
        case SweepVariable::MsPositionGrid: return "d11_m";
        case SweepVariable::SubarraySpacing: return "spacing_m";
        case SweepVariable::PartitionPattern: return "pattern_index";
        }
        return "value";
    }();

    for (int k : series) {
        ExperimentContext ctx = config.context;
        ctx.slots = k;
        const auto records = run_sweep(config.sweep, ctx);
        for (const RmseRecord& r : records) {
            std::string label = r.label;
            if (series.size() > 1)
                label = label.empty() ? ("K=" + std::to_string(k))
                                      : (label + ",K=" + std::to_string(k));
            rows.push_back({var_name, format_double(r.value), label, format_double(r.rmse_m),
                            format_double(r.crlb_m), format_double(r.fail_rate),
                            std::to_string(r.trials)});
        }
    }
    write_csv(out_path(config, "rmse_sweep.csv"),
              {"sweep_var", "value", "label", "rmse_m", "crlb_m", "fail_rate", "trials"}, rows);
    write_manifest(out_path(config, "manifest.json"), slurp(args.config_path), config,
                   "simulate");
    return 0;
}

int cmd_gdop(const CommonArgs& args) {
    const RunConfig config = resolve(args);
    std::vector<PatternChoice> designs = config.gdop_designs;
    if (designs.empty())
        designs = {config.context.pattern};

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
    for (const PatternChoice& design : designs) {
        const Scene scene =
            config.context.build_scene(design, config.context.v_spacing,
                                       config.context.h_spacing);
        const double g = gdop(scene);
        const double peb_m = context_peb(scene, config.context, config.context.tx_power_dbm,
                                         config.context.slots);
        std::ostringstream centroid;
        centroid << '[' << design.centroid.x() << ' ' << design.centroid.y() << ' '
                 << design.centroid.z() << ']';
        rows.push_back({design.label, centroid.str(), format_double(g), format_double(peb_m)});

        std::ostringstream hrows;
        hrows << "H(" << design.label << " @ " << centroid.str() << "):";
        for (const SubarrayConfig& sub : scene.subarrays) {
            const double d = (scene.ms_position - sub.centroid).norm();
            hrows << " [" << format_double(sub.centroid.x() / d) << ' '
                  << format_double(sub.centroid.y() / d) << ' '
                  << format_double(sub.centroid.z() / d) << ']';
        }
        notes.push_back(hrows.str());
    }
    write_csv(out_path(config, "gdop_table.csv"),
              {"design", "centroid_m", "gdop", "crlb_rmse_m"}, rows);
    write_manifest(out_path(config, "manifest.json"), slurp(args.config_path), config, "gdop",
                   notes);
    return 0;
}

int cmd_heatmap(const CommonArgs& args) {
    const RunConfig config = resolve(args);
    const auto cells = heatmap(config.heatmap, config.context);
    std::vector<std::vector<std::string>> rows;
    for (const HeatmapCell& c : cells)
        rows.push_back({format_double(c.y), format_double(c.z), format_double(c.d11),
                        format_double(c.peb_m),
                        c.rmse_m < 0.0 ? "" : format_double(c.rmse_m),
                        c.rmse_m < 0.0 ? "" : format_double(c.fail_rate)});
    write_csv(out_path(config, "heatmap.csv"),
              {"y_m", "z_m", "d11_m", "peb_m", "rmse_m", "fail_rate"}, rows);
    write_manifest(out_path(config, "manifest.json"), slurp(args.config_path), config,
                   "heatmap");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-anchor 3D localization with a partitioned receiving RIS"};
    app.require_subcommand(1);

    CommonArgs args;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", args.config_path, "JSON config path")->required();
        cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", args.seed, "base seed override")
            ->each([&](const std::string&) { args.seed_set = true; });
        cmd->add_option("--trials", args.trials, "trial count override");
        cmd->add_option("--threads", args.threads, "worker threads");
    };

    CLI::App* crlb = app.add_subcommand("crlb", "bound curves vs the LoS/NLoS angle gap");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo RMSE sweep");
    CLI::App* gdop_cmd = app.add_subcommand("gdop", "partitioning GDoP / bound table");
    CLI::App* heat = app.add_subcommand("heatmap", "PEB (and RMSE) over MS positions");
    for (CLI::App* cmd : {crlb, simulate, gdop_cmd, heat})
        add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (crlb->parsed())
            return cmd_crlb(args);
        if (simulate->parsed())
            return cmd_simulate(args);
        if (gdop_cmd->parsed())
            return cmd_gdop(args);
        if (heat->parsed())
            return cmd_heatmap(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
