// SPDX-License-Identifier: Apache-2.0
#include "rris/fusion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rris {

Eigen::Matrix3d bearing_projector(double theta, double phi) {
    const Vec3 xi = bearing_from_angles(theta, phi);
    return Eigen::Matrix3d::Identity() - xi * xi.transpose();
}

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double hi = v[n / 2];
    if (n % 2 == 1)
        return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + hi);
}

} // namespace

std::vector<bool> mad_filter(const std::vector<double>& values) {
    std::vector<bool> keep(values.size(), true);
    if (values.size() < 3)
        return keep;
    const double med = median_of(values);
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        dev[i] = std::abs(values[i] - med);
    const double mad = median_of(dev);
    if (mad < 1e-12) {
        // 3*MAD is vacuous here; drop only values measurably off the median.
        for (std::size_t i = 0; i < values.size(); ++i)
            keep[i] = dev[i] <= 1e-9;
        return keep;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
        keep[i] = dev[i] <= 3.0 * mad;
    return keep;
}

Vec3 ls_position(const std::vector<Eigen::Matrix3d>& projectors,
                 const std::vector<Vec3>& anchors, const std::vector<bool>& include) {
    if (projectors.size() != anchors.size() || projectors.size() != include.size())
        throw std::invalid_argument("ls_position: mismatched inputs");
    Eigen::Matrix3d lhs = Eigen::Matrix3d::Zero();
    Vec3 rhs = Vec3::Zero();
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        if (!include[i])
            continue;
        lhs += projectors[i];
        rhs += projectors[i] * anchors[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(lhs);
    if (eig.eigenvalues().minCoeff() < 1e-9 * std::max(eig.eigenvalues().maxCoeff(), 1e-300))
        throw std::domain_error("ls_position: bearing geometry is singular (parallel rays)");
    return lhs.ldlt().solve(rhs);
}

FixResult fuse_position(const std::vector<AoaEstimate>& estimates,
                        const std::vector<Vec3>& anchors) {
    if (estimates.size() != anchors.size())
        throw std::invalid_argument("fuse_position: mismatched inputs");
    FixResult out;
    out.used.assign(estimates.size(), false);

    // Known-bad estimates leave before the statistical rule sees them.
    std::vector<std::size_t> reliable;
    for (std::size_t i = 0; i < estimates.size(); ++i)
        if (estimates[i].reliable)
            reliable.push_back(i);
    if (reliable.size() < 2)
        return out;

    std::vector<double> thetas, phis;
    for (std::size_t i : reliable) {
        thetas.push_back(estimates[i].theta_hat);
        phis.push_back(estimates[i].phi_hat);
    }
    const std::vector<bool> keep_theta = mad_filter(thetas);
    const std::vector<bool> keep_phi = mad_filter(phis);

    std::vector<std::size_t> included;
    for (std::size_t k = 0; k < reliable.size(); ++k)
        if (keep_theta[k] && keep_phi[k])
            included.push_back(reliable[k]);
    if (included.size() < 2) {
        included = reliable; // biased fix with a flag beats no output
        out.low_confidence = true;
    }

    std::vector<Eigen::Matrix3d> projectors;
    std::vector<Vec3> pts;
    std::vector<bool> inc;
    for (std::size_t i : included) {
        projectors.push_back(bearing_projector(estimates[i].theta_hat, estimates[i].phi_hat));
        pts.push_back(anchors[i]);
        inc.push_back(true);
        out.used[i] = true;
    }
    try {
        out.position = ls_position(projectors, pts, inc);
        out.ok = true;
    } catch (const std::domain_error&) {
        out.ok = false;
    }
    return out;
}

} // namespace rris
