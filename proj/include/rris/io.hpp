// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_IO_HPP
#define RRIS_IO_HPP

#include <string>
#include <vector>

#include "rris/experiments.hpp"

namespace rris {

// Raised for schema violations; carries a JSON-pointer-style path.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Angle-difference sweep for the bound curves command.
struct CrlbSpec {
    double delta_min = 0.0;
    double delta_max = kPi / 2.0;
    int delta_count = 64;
    std::vector<double> delta_spreads = {0.0};
};

struct RunConfig {
    ExperimentContext context;
    SweepSpec sweep;
    HeatmapSpec heatmap;
    CrlbSpec crlb;
    std::vector<PatternChoice> gdop_designs;
    std::vector<int> k_series; // simulate runs one curve per entry
    std::string output_dir = "out";
};

// Parses and validates a JSON config file. Unknown keys are hard errors.
// An optional "scene_file" (path relative to the config) supplies the scene
// block from a separate file.
RunConfig load_config(const std::string& path);

// Scene block (de)serialization: positions in meters, frequency in GHz.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json_text(const std::string& text);

// CSV with a header row; cells are written with %.17g.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

// Run manifest: config echo, resolved seed/trials/threads, program version.
void write_manifest(const std::string& path, const std::string& config_echo,
                    const RunConfig& config, const std::string& command,
                    const std::vector<std::string>& extra_lines = {});

} // namespace rris

#endif
