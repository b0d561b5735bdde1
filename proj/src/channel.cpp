// SPDX-License-Identifier: Apache-2.0
#include "rris/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "rris/rng.hpp"

namespace rris {

double pathloss(double distance_m, double carrier_freq_ghz) {
    if (distance_m <= 0.0 || carrier_freq_ghz <= 0.0)
        throw std::domain_error("pathloss: distance and carrier frequency must be positive");
    return std::pow(10.0, 3.245) * distance_m * distance_m * carrier_freq_ghz * carrier_freq_ghz;
}

VecC steering_y(double theta, double phi, int elements_y, double spacing_m,
                double wavelength_m) {
    if (elements_y < 1)
        throw std::invalid_argument("steering_y: element count must be >= 1");
    const double step = 2.0 * kPi * spacing_m * std::sin(theta) * std::sin(phi) / wavelength_m;
    VecC a(elements_y);
    for (int m = 0; m < elements_y; ++m)
        a(m) = std::polar(1.0, step * m);
    return a;
}

VecC steering_z(double phi, int elements_z, double spacing_m, double wavelength_m) {
    if (elements_z < 1)
        throw std::invalid_argument("steering_z: element count must be >= 1");
    const double step = 2.0 * kPi * spacing_m * std::cos(phi) / wavelength_m;
    VecC a(elements_z);
    for (int m = 0; m < elements_z; ++m)
        a(m) = std::polar(1.0, step * m);
    return a;
}

VecC farfield_channel(const SubarrayPaths& paths, const SubarrayConfig& config,
                      double wavelength_m) {
    if (paths.empty())
        throw std::invalid_argument("farfield_channel: at least one path required");
    VecC h = VecC::Zero(config.element_count());
    for (const PathEntry& p : paths) {
        const VecC ay = steering_y(p.theta, p.phi, config.elements_y, config.spacing_y, wavelength_m);
        const VecC az = steering_z(p.phi, config.elements_z, config.spacing_z, wavelength_m);
        for (int my = 0; my < config.elements_y; ++my)
            for (int mz = 0; mz < config.elements_z; ++mz)
                h(my * config.elements_z + mz) += p.gain * ay(my) * az(mz);
    }
    return h;
}

std::vector<Vec3> element_offsets(const SubarrayConfig& config) {
    std::vector<Vec3> offsets;
    offsets.reserve(config.element_count());
    const double cy = 0.5 * (config.elements_y - 1);
    const double cz = 0.5 * (config.elements_z - 1);
    for (int my = 0; my < config.elements_y; ++my)
        for (int mz = 0; mz < config.elements_z; ++mz)
            offsets.emplace_back(0.0, (cy - my) * config.spacing_y, (cz - mz) * config.spacing_z);
    return offsets;
}

Vec3 propagation_direction(double theta, double phi) {
    const double fy = std::sin(theta) * std::sin(phi);
    const double fz = std::cos(phi);
    const double x2 = std::max(0.0, 1.0 - fy * fy - fz * fz);
    return {-std::sqrt(x2), fy, fz};
}

VecC nearfield_channel(const Scene& scene, int subarray_index, const SubarrayPaths& paths) {
    if (subarray_index < 0 || subarray_index >= scene.subarray_count())
        throw std::out_of_range("nearfield_channel: subarray index out of range");
    const SubarrayConfig& cfg = scene.subarrays[subarray_index];
    const std::vector<Vec3> offsets = element_offsets(cfg);
    const double k = 2.0 * kPi / scene.wavelength;
    VecC h = VecC::Zero(cfg.element_count());
    for (const PathEntry& p : paths) {
        const Vec3 source = p.dist * propagation_direction(p.theta, p.phi); // centroid frame
        for (std::size_t m = 0; m < offsets.size(); ++m) {
            const double dm = (source - offsets[m]).norm();
            if (dm < 1e-9)
                throw std::domain_error("nearfield_channel: source coincides with an element");
            h(static_cast<Eigen::Index>(m)) += p.gain * std::polar(1.0, k * (dm - p.dist));
        }
    }
    return h;
}

namespace {

PathEntry path_from_geometry(double theta, double phi, double dist, const Scene& scene) {
    PathEntry p;
    p.theta = theta;
    p.dist = dist;
    p.phi_clamped = phi < -kPi / 2.0 || phi > kPi / 2.0;
    p.phi = std::clamp(phi, -kPi / 2.0, kPi / 2.0);
    p.pathloss = pathloss(dist, scene.carrier_freq_ghz);
    p.gain = std::polar(1.0 / std::sqrt(p.pathloss), -2.0 * kPi * dist / scene.wavelength);
    return p;
}

} // namespace

PathSet make_two_path(const Scene& scene, const ScenarioConfig& cfg, std::uint64_t seed) {
    if (cfg.num_paths < 1 || cfg.num_paths > 2)
        throw std::invalid_argument("make_two_path: num_paths must be 1 or 2");
    if (cfg.delta_spread < 0.0)
        throw std::invalid_argument("make_two_path: delta_spread must be >= 0");
    if (cfg.power_ratio_db < 0.0)
        throw std::invalid_argument("make_two_path: power_ratio_db must be >= 0");

    PathSet out;
    out.per_subarray.resize(scene.subarray_count());
    for (int i = 0; i < scene.subarray_count(); ++i) {
        const TruthAngles los = truth_angles(scene, i);
        SubarrayPaths& paths = out.per_subarray[i];
        paths.push_back(path_from_geometry(los.theta, los.phi, los.dist, scene));
        if (cfg.num_paths == 2) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
            const double delta_hat =
                cfg.delta_spread > 0.0
                    ? rng.uniform(cfg.delta - cfg.delta_spread, cfg.delta + cfg.delta_spread)
                    : cfg.delta;
            const double dist_nlos = los.dist * std::pow(10.0, cfg.power_ratio_db / 20.0);
            paths.push_back(
                path_from_geometry(los.theta + delta_hat, los.phi + delta_hat, dist_nlos, scene));
        }
    }
    return out;
}

} // namespace rris
