// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_CHANNEL_HPP
#define RRIS_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "rris/geometry.hpp"

namespace rris {

using Cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

// One propagation path toward a subarray. Entry 0 of a path list is LoS.
struct PathEntry {
    double theta = 0.0;    // azimuth, radians
    double phi = 0.0;      // elevation, radians
    double dist = 0.0;     // meters
    Cplx gain{0.0, 0.0};   // gamma = exp(-j 2 pi d / lambda) / sqrt(rho)
    double pathloss = 0.0; // rho, linear
    bool phi_clamped = false;
};

using SubarrayPaths = std::vector<PathEntry>;

// Paths for every subarray of a scene, index-aligned with Scene::subarrays.
struct PathSet {
    std::vector<SubarrayPaths> per_subarray;
};

// Multipath scenario knobs. The NLoS angle offset delta_hat is drawn from
// U[delta - spread, delta + spread] and applied to both azimuth and
// elevation; the NLoS distance realizes the LoS/NLoS power ratio.
struct ScenarioConfig {
    int num_paths = 2;          // 1 (pure LoS) or 2
    double delta = kPi / 4.0;   // radians
    double delta_spread = 0.0;  // radians, half-width
    double power_ratio_db = 20.0;
};

// Free-space path loss rho = 10^3.245 d^2 f_c^2 with f_c in GHz.
double pathloss(double distance_m, double carrier_freq_ghz);

// Horizontal array response, phase 2 pi d_y (m-1) sin(theta) sin(phi) / lambda.
VecC steering_y(double theta, double phi, int elements_y, double spacing_m,
                double wavelength_m);

// Vertical array response, phase 2 pi d_z (m-1) cos(phi) / lambda.
VecC steering_z(double phi, int elements_z, double spacing_m, double wavelength_m);

// Far-field channel h = sum_l gamma_l * steering_y(l) (x) steering_z(l).
VecC farfield_channel(const SubarrayPaths& paths, const SubarrayConfig& config,
                      double wavelength_m);

// Spherical-wave channel with exact per-element distance phases, referenced
// to the centroid distance. The source of each path sits at range dist along
// the direction implied by the planar array response, so the far-field limit
// is exactly farfield_channel.
VecC nearfield_channel(const Scene& scene, int subarray_index, const SubarrayPaths& paths);

// In-plane element offsets from the centroid, enumeration matching the
// Kronecker ordering of farfield_channel (y-index slow, z-index fast).
std::vector<Vec3> element_offsets(const SubarrayConfig& config);

// Unit direction such that a plane wave from it produces the steering
// phases of Eqs. steering_y/steering_z on the element grid.
Vec3 propagation_direction(double theta, double phi);

// Two-path (or pure LoS) scenario from scene geometry. Deterministic under a
// fixed seed; delta_hat is drawn once per subarray and shared by both angles.
PathSet make_two_path(const Scene& scene, const ScenarioConfig& cfg, std::uint64_t seed);

} // namespace rris

#endif
