// SPDX-License-Identifier: Apache-2.0
#include "rris/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rris {

Vec3 bearing_from_angles(double theta, double phi) {
    const double cp = std::cos(phi);
    return {std::cos(theta) * cp, std::sin(theta) * cp, std::sin(phi)};
}

Scene make_scene(const Vec3& ms_position, std::vector<SubarrayConfig> subarrays,
                 double carrier_freq_ghz) {
    if (subarrays.empty())
        throw std::invalid_argument("make_scene: at least one subarray required");
    Scene scene;
    scene.ms_position = ms_position;
    scene.carrier_freq_ghz = carrier_freq_ghz;
    scene.wavelength = wavelength_m(carrier_freq_ghz);
    for (auto& sub : subarrays) {
        if (sub.elements_y < 1 || sub.elements_z < 1)
            throw std::invalid_argument("make_scene: element counts must be >= 1");
        if (sub.spacing_y == 0.0)
            sub.spacing_y = 0.5 * scene.wavelength;
        if (sub.spacing_z == 0.0)
            sub.spacing_z = 0.5 * scene.wavelength;
        if (sub.spacing_y <= 0.0 || sub.spacing_z <= 0.0)
            throw std::invalid_argument("make_scene: spacings must be positive");
    }
    for (std::size_t a = 0; a < subarrays.size(); ++a)
        for (std::size_t b = a + 1; b < subarrays.size(); ++b)
            if ((subarrays[a].centroid - subarrays[b].centroid).norm() < 1e-12)
                throw std::invalid_argument("make_scene: subarray centroids must be distinct");
    scene.subarrays = std::move(subarrays);
    return scene;
}

TruthAngles truth_angles(const Vec3& ms_position, const Vec3& centroid) {
    const Vec3 diff = ms_position - centroid;
    const double d = diff.norm();
    if (d < 1e-12)
        throw std::domain_error("truth_angles: mobile station coincides with subarray centroid");
    const Vec3 xi = diff / d;
    TruthAngles out;
    out.dist = d;
    out.phi = std::asin(std::clamp(xi.z(), -1.0, 1.0));
    const double cp = std::hypot(xi.x(), xi.y());
    if (cp < 1e-12) {
        // Zenith: any azimuth reproduces the point, keep 0 and flag it.
        out.zenith = true;
        out.theta = 0.0;
    } else {
        out.theta = std::atan2(xi.y(), xi.x());
    }
    return out;
}

TruthAngles truth_angles(const Scene& scene, int subarray_index) {
    if (subarray_index < 0 || subarray_index >= scene.subarray_count())
        throw std::out_of_range("truth_angles: subarray index out of range");
    return truth_angles(scene.ms_position, scene.subarrays[subarray_index].centroid);
}

std::vector<SubarrayConfig> build_partition(const PartitionPattern& pattern,
                                            int elements_y, int elements_z,
                                            double spacing_y, double spacing_z) {
    if (pattern.rows < 1 || pattern.cols < 1)
        throw std::invalid_argument("build_partition: rows and cols must be >= 1");
    std::vector<SubarrayConfig> out;
    out.reserve(static_cast<std::size_t>(pattern.rows) * pattern.cols);
    const double y0 = -0.5 * (pattern.cols - 1) * pattern.h_spacing;
    const double z0 = 0.5 * (pattern.rows - 1) * pattern.v_spacing;
    for (int c = 0; c < pattern.cols; ++c) {
        for (int r = 0; r < pattern.rows; ++r) {
            SubarrayConfig sub;
            sub.centroid = pattern.centroid +
                           Vec3(0.0, y0 + c * pattern.h_spacing, z0 - r * pattern.v_spacing);
            sub.elements_y = elements_y;
            sub.elements_z = elements_z;
            sub.spacing_y = spacing_y;
            sub.spacing_z = spacing_z;
            out.push_back(sub);
        }
    }
    return out;
}

double gdop(const Scene& scene) {
    const int n = scene.subarray_count();
    Eigen::MatrixXd H(n, 3);
    for (int i = 0; i < n; ++i) {
        const double d = (scene.ms_position - scene.subarrays[i].centroid).norm();
        if (d < 1e-12)
            throw std::domain_error("gdop: mobile station coincides with a subarray centroid");
        H.row(i) = scene.subarrays[i].centroid.transpose() / d;
    }
    const Eigen::Matrix3d gram = H.transpose() * H;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double tol = 1e-10 * std::max(lmax, 1.0);
    double trace_pinv = 0.0;
    for (int k = 0; k < 3; ++k)
        if (eig.eigenvalues()(k) > tol)
            trace_pinv += 1.0 / eig.eigenvalues()(k);
    return std::sqrt(trace_pinv);
}

PartitionPattern parse_pattern_label(const std::string& label, const Vec3& centroid,
                                     double v_spacing, double h_spacing) {
    const auto x = label.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= label.size())
        throw std::invalid_argument("parse_pattern_label: expected \"<cols>x<rows>\", got " + label);
    PartitionPattern p;
    p.cols = std::stoi(label.substr(0, x));
    p.rows = std::stoi(label.substr(x + 1));
    if (p.cols < 1 || p.rows < 1)
        throw std::invalid_argument("parse_pattern_label: counts must be >= 1 in " + label);
    p.centroid = centroid;
    p.v_spacing = v_spacing;
    p.h_spacing = h_spacing;
    return p;
}

} // namespace rris
