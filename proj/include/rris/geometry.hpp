// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_GEOMETRY_HPP
#define RRIS_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rris/units.hpp"

namespace rris {

using Vec3 = Eigen::Vector3d;

// One uniform planar subarray of meta-atoms feeding a single RX chain.
// Elements lie in a plane parallel to y-z; the element grid is centered on
// the centroid, indexed from the +y/+z corner toward -y/-z.
struct SubarrayConfig {
    Vec3 centroid = Vec3::Zero(); // meters
    int elements_y = 4;
    int elements_z = 4;
    double spacing_y = 0.0; // meters; 0 means "set to lambda/2 at scene build"
    double spacing_z = 0.0;

    int element_count() const { return elements_y * elements_z; }
};

// Regular grid of subarray centroids. cols counts subarrays along y
// (horizontal), rows counts along z (vertical); the conventional pattern
// labels follow "cols x rows", so "1x4" is a vertical line and "4x1" a
// horizontal one. h_spacing / v_spacing are adjacent-centroid distances.
struct PartitionPattern {
    int rows = 2;
    int cols = 2;
    double v_spacing = 0.8; // meters between adjacent centroids along z
    double h_spacing = 0.8; // meters between adjacent centroids along y
    Vec3 centroid = Vec3::Zero();
};

struct Scene {
    Vec3 ms_position = Vec3::Zero();
    std::vector<SubarrayConfig> subarrays;
    double carrier_freq_ghz = 28.0;
    double wavelength = 0.0; // meters, always c / (f_c * 1e9)

    int subarray_count() const { return static_cast<int>(subarrays.size()); }
};

// Azimuth/elevation/distance of the mobile station seen from one subarray
// centroid. zenith is set when |elevation| = pi/2 and azimuth is undefined.
struct TruthAngles {
    double theta = 0.0; // azimuth, (-pi, pi]
    double phi = 0.0;   // elevation, [-pi/2, pi/2]
    double dist = 0.0;  // meters
    bool zenith = false;
};

// Unit bearing [cos(theta)cos(phi), sin(theta)cos(phi), sin(phi)].
Vec3 bearing_from_angles(double theta, double phi);

// Builds a Scene, validating invariants and filling lambda/2 spacings.
Scene make_scene(const Vec3& ms_position, std::vector<SubarrayConfig> subarrays,
                 double carrier_freq_ghz);

// Inverts p_MS = centroid + d * xi for subarray i of the scene.
TruthAngles truth_angles(const Scene& scene, int subarray_index);
TruthAngles truth_angles(const Vec3& ms_position, const Vec3& centroid);

// Expands a partition pattern into per-subarray configs. Centroids form an
// arithmetic grid symmetric about pattern.centroid; enumeration order is
// y-major (all rows of the first column, then the next column).
std::vector<SubarrayConfig> build_partition(const PartitionPattern& pattern,
                                            int elements_y, int elements_z,
                                            double spacing_y = 0.0,
                                            double spacing_z = 0.0);

// Geometric dilution of precision: sqrt(Tr{(H^T H)^+}) with row i of H equal
// to centroid_i / d_i. The pseudo-inverse keeps line deployments (exactly
// rank-deficient H^T H) finite.
double gdop(const Scene& scene);

// Parses "AxB" pattern labels where A counts along y and B along z.
PartitionPattern parse_pattern_label(const std::string& label, const Vec3& centroid,
                                     double v_spacing = 0.8, double h_spacing = 0.8);

} // namespace rris

#endif
