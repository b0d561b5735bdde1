// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_EXPERIMENTS_HPP
#define RRIS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rris/anm.hpp"
#include "rris/crlb.hpp"
#include "rris/fusion.hpp"
#include "rris/geometry.hpp"
#include "rris/measurement.hpp"
#include "rris/ompdict.hpp"

namespace rris {

enum class Estimator { AnmMusic, Omp, CrlbOnly };

struct PatternChoice {
    std::string label = "2x2"; // "<cols>x<rows>", cols along y
    Vec3 centroid = Vec3(2.0, 5.0, 5.0);
};

// Everything a sweep needs to rebuild scenes and run trials.
struct ExperimentContext {
    Vec3 ms_position = Vec3::Zero();
    double carrier_freq_ghz = 28.0;
    PatternChoice pattern;
    double v_spacing = 0.8; // adjacent-centroid steps, meters
    double h_spacing = 0.8;
    int elements_y = 4;
    int elements_z = 4;

    ScenarioConfig scenario;
    double tx_power_dbm = 20.0; // used when not swept
    int slots = 32;             // K, used when not swept
    CombinerKind combiner = CombinerKind::Dft;
    double bandwidth_mhz = 10.0;

    AnmOptions anm_opts;
    // The atomic-norm weight is mu_scale * sqrt(P_linear * K) * sigma *
    // sqrt(M ln M): the data term ||y - sqrt(P) W^H h||^2 grows with P*K, so
    // the penalty tracks the sensing gain while the sigma*sqrt(M ln M) law
    // fixes the noise and array dependence. Calibrated on RMSE at 0 dBm.
    double mu_scale = 2.0;
    GridDictionary omp_grid;
    int omp_sparsity = 2;
    int threads = 1;

    Scene build_scene() const;
    Scene build_scene(const PatternChoice& choice, double v_step, double h_step) const;
    double noise_var_dbm() const { return noise_variance_dbm(bandwidth_mhz); }
};

enum class SweepVariable { TxPower, Slots, MsPositionGrid, SubarraySpacing, PartitionPattern };

struct SweepSpec {
    SweepVariable variable = SweepVariable::TxPower;
    std::vector<double> values;        // dBm / K / spacing, per variable
    std::vector<Vec3> ms_positions;    // MsPositionGrid points
    std::vector<PatternChoice> patterns; // PartitionPattern choices
    int trials = 200;
    std::uint64_t base_seed = 1;
    Estimator estimator = Estimator::AnmMusic;

    std::size_t point_count() const;
};

struct RmseRecord {
    double value = 0.0;     // numeric sweep value (distance d11 for MS grid,
                            // index for pattern sweeps)
    std::string label;      // pattern label when applicable
    double rmse_m = 0.0;
    double crlb_m = 0.0;    // PEB companion
    double fail_rate = 0.0; // no-fix trials / trials (excluded from RMSE)
    int trials = 0;
};

struct TrialResult {
    bool ok = false;
    bool low_confidence = false;
    double error_m = 0.0;
};

// One full localization trial (Algorithm sequence: measure, denoise, angle
// extraction, outlier-filtered LS fix) with all randomness derived from seed.
TrialResult run_trial(const Scene& scene, const ExperimentContext& ctx, double tx_power_dbm,
                      int slots, Estimator estimator, std::uint64_t seed);

// Monte Carlo sweep; deterministic for a fixed base_seed regardless of the
// worker count (per-trial seeds are a pure function of point/trial indices).
std::vector<RmseRecord> run_sweep(const SweepSpec& spec, const ExperimentContext& ctx);

struct HeatmapSpec {
    double y_min = 0.0, y_max = 10.0;
    double z_min = 0.0, z_max = 10.0;
    double step = 0.5;
    bool with_rmse = false;
    int trials = 20;
    std::uint64_t base_seed = 1;
};

struct HeatmapCell {
    double y = 0.0, z = 0.0;
    double d11 = 0.0;   // LoS distance to subarray 1
    double peb_m = 0.0;
    double rmse_m = -1.0;   // < 0 when RMSE disabled
    double fail_rate = 0.0;
};

// MS grid on the x = 0 plane; PEB everywhere, simulated RMSE optional.
std::vector<HeatmapCell> heatmap(const HeatmapSpec& spec, const ExperimentContext& ctx);

// PEB for a scene under the context's waveform settings (combiner drawn with
// a fixed seed when random).
double context_peb(const Scene& scene, const ExperimentContext& ctx, double tx_power_dbm,
                   int slots);

} // namespace rris

#endif
