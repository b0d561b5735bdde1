// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_FUSION_HPP
#define RRIS_FUSION_HPP

#include <vector>

#include "rris/geometry.hpp"
#include "rris/music.hpp"

namespace rris {

// B = I - xi xi^T: symmetric, idempotent, rank 2, annihilates the bearing.
Eigen::Matrix3d bearing_projector(double theta, double phi);

// Keep mask for the three-MAD outlier rule. With fewer than three values,
// or when every value equals the median, everything is kept; at MAD = 0
// with distinct values only exact-median entries (within 1e-9 rad) survive.
std::vector<bool> mad_filter(const std::vector<double>& values);

struct FixResult {
    Vec3 position = Vec3::Zero();
    std::vector<bool> used;     // per input estimate
    bool ok = false;            // false: no usable geometry (singular sum)
    bool low_confidence = false; // outlier filtering left < 2 subarrays; fell
                                 // back to all reliable estimates
};

// Least-squares line intersection p = (sum B_i)^{-1} (sum B_i anchor_i)
// over the included subarrays.
Vec3 ls_position(const std::vector<Eigen::Matrix3d>& projectors,
                 const std::vector<Vec3>& anchors, const std::vector<bool>& include);

// Full fusion step: reliability gating, per-angle MAD outlier exclusion,
// low-confidence fallback, then the LS fix.
FixResult fuse_position(const std::vector<AoaEstimate>& estimates,
                        const std::vector<Vec3>& anchors);

} // namespace rris

#endif
