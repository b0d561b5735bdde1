// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_OMPDICT_HPP
#define RRIS_OMPDICT_HPP

#include <vector>

#include "rris/channel.hpp"
#include "rris/music.hpp"

namespace rris {

// Implicit steering dictionary over theta in [0, pi], phi in [-pi/2, pi/2].
// Atoms are generated on the fly from grid indices; the dense dictionary
// (grid_y * grid_z atoms of length M) is never materialized.
struct GridDictionary {
    int grid_y = 2048; // azimuth-axis points
    int grid_z = 2048; // elevation-axis points
};

struct OmpResult {
    VecC h_hat;
    std::vector<std::pair<double, double>> angles; // selected (theta, phi), per atom
    std::vector<double> amplitudes;                // |coefficient| per atom
    double residual_norm = 0.0;
    int dominant = 0;                              // index of the largest-amplitude atom
    AoaEstimate dominant_aoa() const;              // bearing of the dominant atom
};

// Greedy pursuit on y = sqrt(P) W^H h with exactly `sparsity` iterations.
// Scores are |<atom, sqrt(P) W r>| computed through the Kronecker split:
// per phi, the back-projected residual is reduced along z once and the
// azimuth row is swept as a length-M_y polynomial in the unit-circle phase.
OmpResult omp_estimate(const VecC& y, const MatC& combiner, double tx_power,
                       int elements_y, int elements_z, const GridDictionary& grid,
                       int sparsity);

} // namespace rris

#endif
