// SPDX-License-Identifier: Apache-2.0
#include "rris/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rris/music.hpp"
#include "rris/rng.hpp"

namespace rris {

Scene ExperimentContext::build_scene() const {
    return build_scene(pattern, v_spacing, h_spacing);
}

Scene ExperimentContext::build_scene(const PatternChoice& choice, double v_step,
                                     double h_step) const {
    const PartitionPattern p = parse_pattern_label(choice.label, choice.centroid, v_step, h_step);
    return make_scene(ms_position, build_partition(p, elements_y, elements_z), carrier_freq_ghz);
}

std::size_t SweepSpec::point_count() const {
    switch (variable) {
    case SweepVariable::MsPositionGrid:
        return ms_positions.size();
    case SweepVariable::PartitionPattern:
        return patterns.size();
    default:
        return values.size();
    }
}

namespace {

// Seed roles keep the random streams of one trial disjoint.
constexpr std::uint64_t kSeedPaths = 1;
constexpr std::uint64_t kSeedCombiner = 2;
constexpr std::uint64_t kSeedNoise = 3;

MatC trial_combiner(const ExperimentContext& ctx, int elements, int slots,
                    std::uint64_t trial_seed, int subarray) {
    if (ctx.combiner == CombinerKind::Dft)
        return dft_combiner(elements, slots);
    return random_phase_combiner(elements, slots,
                                 mix_seed(trial_seed, kSeedCombiner, subarray));
}

} // namespace

TrialResult run_trial(const Scene& scene, const ExperimentContext& ctx, double tx_power_dbm,
                      int slots, Estimator estimator, std::uint64_t seed) {
    if (estimator == Estimator::CrlbOnly)
        throw std::invalid_argument("run_trial: CrlbOnly has no Monte Carlo trials");
    const double noise_dbm = ctx.noise_var_dbm();
    const double noise_std = std::sqrt(dbm_to_mw(noise_dbm));
    const PathSet paths = make_two_path(scene, ctx.scenario, mix_seed(seed, kSeedPaths));

    std::vector<AoaEstimate> estimates;
    std::vector<Vec3> anchors;
    estimates.reserve(scene.subarray_count());
    for (int i = 0; i < scene.subarray_count(); ++i) {
        const SubarrayConfig& sub = scene.subarrays[i];
        const VecC h = nearfield_channel(scene, i, paths.per_subarray[i]);
        const MeasurementSet ms =
            measure(h, trial_combiner(ctx, sub.element_count(), slots, seed, i), tx_power_dbm,
                    noise_dbm, mix_seed(seed, kSeedNoise, i));

        AoaEstimate est;
        if (estimator == Estimator::AnmMusic) {
            AnmProblem problem;
            problem.y = ms.received;
            problem.w = ms.combiner;
            problem.tx_power = dbm_to_mw(ms.tx_power_dbm);
            const double gain = std::sqrt(problem.tx_power * ms.slots); // sensing-operator scale
            problem.mu =
                regularization_weight(noise_std, sub.element_count(), ctx.mu_scale * gain);
            problem.elements_y = sub.elements_y;
            problem.elements_z = sub.elements_z;
            const AnmSolution sol = solve_anm(problem, ctx.anm_opts);
            const CorrelationPair pair = decompose(sol.h_hat, sub.elements_y, sub.elements_z);
            est = extract_aoa(pair, std::max(1, ctx.scenario.num_paths));
        } else {
            const OmpResult omp =
                omp_estimate(ms.received, ms.combiner, dbm_to_mw(ms.tx_power_dbm),
                             sub.elements_y, sub.elements_z, ctx.omp_grid, ctx.omp_sparsity);
            est = omp.dominant_aoa();
        }
        estimates.push_back(est);
        anchors.push_back(sub.centroid);
    }

    const FixResult fix = fuse_position(estimates, anchors);
    TrialResult out;
    out.ok = fix.ok;
    out.low_confidence = fix.low_confidence;
    if (fix.ok)
        out.error_m = (fix.position - scene.ms_position).norm();
    return out;
}

double context_peb(const Scene& scene, const ExperimentContext& ctx, double tx_power_dbm,
                   int slots) {
    ScenarioConfig mean_scenario = ctx.scenario;
    mean_scenario.delta_spread = 0.0; // bound evaluated at the mean offset
    const PathSet paths = make_two_path(scene, mean_scenario, 0);
    std::vector<MatC> combiners;
    if (ctx.combiner == CombinerKind::Dft) {
        combiners.push_back(dft_combiner(ctx.elements_y * ctx.elements_z, slots));
    } else {
        for (int i = 0; i < scene.subarray_count(); ++i)
            combiners.push_back(random_phase_combiner(ctx.elements_y * ctx.elements_z, slots,
                                                      mix_seed(0xC0, kSeedCombiner, i)));
    }
    return peb(scene, paths, combiners, tx_power_dbm, ctx.noise_var_dbm());
}

namespace {

struct PointSetup {
    Scene scene;
    double tx_power_dbm;
    int slots;
    double value;
    std::string label;
};

PointSetup setup_point(const SweepSpec& spec, const ExperimentContext& ctx, std::size_t index) {
    PointSetup out{ctx.build_scene(), ctx.tx_power_dbm, ctx.slots, 0.0, {}};
    switch (spec.variable) {
    case SweepVariable::TxPower:
        out.tx_power_dbm = spec.values.at(index);
        out.value = out.tx_power_dbm;
        break;
    case SweepVariable::Slots:
        out.slots = static_cast<int>(spec.values.at(index));
        if (out.slots < 1)
            throw std::invalid_argument("run_sweep: K must be >= 1");
        out.value = out.slots;
        break;
    case SweepVariable::SubarraySpacing: {
        const double step = spec.values.at(index);
        out.scene = ctx.build_scene(ctx.pattern, step, step);
        out.value = step;
        break;
    }
    case SweepVariable::MsPositionGrid: {
        const Vec3 ms = spec.ms_positions.at(index);
        Scene base = ctx.build_scene();
        out.scene = make_scene(ms, base.subarrays, ctx.carrier_freq_ghz);
        out.value = truth_angles(out.scene, 0).dist;
        break;
    }
    case SweepVariable::PartitionPattern: {
        const PatternChoice& choice = spec.patterns.at(index);
        out.scene = ctx.build_scene(choice, ctx.v_spacing, ctx.h_spacing);
        out.value = static_cast<double>(index);
        out.label = choice.label;
        break;
    }
    }
    return out;
}

void run_trials_pool(const Scene& scene, const ExperimentContext& ctx, double tx_power_dbm,
                     int slots, Estimator estimator, const std::vector<std::uint64_t>& seeds,
                     std::vector<TrialResult>& results) {
    const int workers = std::max(1, ctx.threads);
    if (workers == 1) {
        for (std::size_t t = 0; t < seeds.size(); ++t)
            results[t] = run_trial(scene, ctx, tx_power_dbm, slots, estimator, seeds[t]);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t t = w; t < seeds.size(); t += workers)
                results[t] = run_trial(scene, ctx, tx_power_dbm, slots, estimator, seeds[t]);
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace

std::vector<RmseRecord> run_sweep(const SweepSpec& spec, const ExperimentContext& ctx) {
    if (spec.point_count() == 0)
        throw std::invalid_argument("run_sweep: empty sweep values");
    if (spec.trials < 1)
        throw std::invalid_argument("run_sweep: trials must be >= 1");

    std::vector<RmseRecord> records;
    records.reserve(spec.point_count());
    for (std::size_t p = 0; p < spec.point_count(); ++p) {
        const PointSetup point = setup_point(spec, ctx, p);
        RmseRecord rec;
        rec.value = point.value;
        rec.label = point.label;
        rec.crlb_m = context_peb(point.scene, ctx, point.tx_power_dbm, point.slots);

        if (spec.estimator == Estimator::CrlbOnly) {
            rec.rmse_m = rec.crlb_m;
            rec.trials = 0;
            records.push_back(rec);
            continue;
        }

        std::vector<std::uint64_t> seeds(spec.trials);
        for (int t = 0; t < spec.trials; ++t)
            seeds[t] = mix_seed(spec.base_seed, p, static_cast<std::uint64_t>(t));
        std::vector<TrialResult> outcomes(spec.trials);
        run_trials_pool(point.scene, ctx, point.tx_power_dbm, point.slots, spec.estimator,
                        seeds, outcomes);

        double sum_sq = 0.0;
        int ok = 0;
        for (const TrialResult& r : outcomes) {
            if (!r.ok)
                continue;
            sum_sq += r.error_m * r.error_m;
            ++ok;
        }
        rec.trials = spec.trials;
        rec.fail_rate = 1.0 - static_cast<double>(ok) / spec.trials;
        rec.rmse_m = ok > 0 ? std::sqrt(sum_sq / ok) : std::numeric_limits<double>::infinity();
        records.push_back(rec);
    }
    return records;
}

std::vector<HeatmapCell> heatmap(const HeatmapSpec& spec, const ExperimentContext& ctx) {
    if (spec.step <= 0.0)
        throw std::invalid_argument("heatmap: step must be positive");
    std::vector<HeatmapCell> cells;
    const Scene base = ctx.build_scene();
    std::size_t point = 0;
    for (double y = spec.y_min; y <= spec.y_max + 1e-9; y += spec.step) {
        for (double z = spec.z_min; z <= spec.z_max + 1e-9; z += spec.step, ++point) {
            const Vec3 ms(0.0, y, z);
            Scene scene = make_scene(ms, base.subarrays, ctx.carrier_freq_ghz);
            HeatmapCell cell;
            cell.y = y;
            cell.z = z;
            cell.d11 = truth_angles(scene, 0).dist;
            cell.peb_m = context_peb(scene, ctx, ctx.tx_power_dbm, ctx.slots);
            if (spec.with_rmse) {
                std::vector<std::uint64_t> seeds(spec.trials);
                for (int t = 0; t < spec.trials; ++t)
                    seeds[t] = mix_seed(spec.base_seed, point, static_cast<std::uint64_t>(t));
                std::vector<TrialResult> outcomes(spec.trials);
                run_trials_pool(scene, ctx, ctx.tx_power_dbm, ctx.slots, Estimator::AnmMusic,
                                seeds, outcomes);
                double sum_sq = 0.0;
                int ok = 0;
                for (const TrialResult& r : outcomes) {
                    if (!r.ok)
                        continue;
                    sum_sq += r.error_m * r.error_m;
                    ++ok;
                }
                cell.fail_rate = 1.0 - static_cast<double>(ok) / spec.trials;
                cell.rmse_m =
                    ok > 0 ? std::sqrt(sum_sq / ok) : std::numeric_limits<double>::infinity();
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

} // namespace rris
