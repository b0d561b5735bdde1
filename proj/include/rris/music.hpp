// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_MUSIC_HPP
#define RRIS_MUSIC_HPP

#include <vector>

#include "rris/channel.hpp"

namespace rris {

// Axis-factor correlation matrices extracted from h h^H: C_z sums the
// diagonal M_z x M_z blocks, C_y sums the per-offset M_y x M_y extractions.
// Both are Hermitian-symmetrized on construction.
struct CorrelationPair {
    MatC c_z;
    MatC c_y;
};

CorrelationPair decompose(const VecC& h_hat, int elements_y, int elements_z);

// Spatial frequencies f in [-1, 1) of a lambda/2-spaced response with phases
// j*pi*(m-1)*f, recovered as the model_order noise-polynomial roots strictly
// inside the unit circle with largest modulus.
std::vector<double> root_music(const MatC& corr, int model_order);

struct AoaEstimate {
    double theta_hat = 0.0; // radians
    double phi_hat = 0.0;   // radians, [-pi/2, pi/2]
    bool reliable = true;
    double component_power = 0.0; // fitted LoS amplitude used for selection
};

// LoS azimuth/elevation from the correlation pair. Frequencies are ranked by
// their least-squares-fitted component power; the largest is taken as LoS.
// The (theta, phi) representative returned is the front-hemisphere bearing
// (x-component <= 0); it equals the true angles whenever the source lies on
// the covered side (below the subarray plane), which the z-frequency cos(phi)
// cannot itself disambiguate. reliable is cleared near phi = 0 (elevation
// frequency at the band edge) and near sin(theta) = 0 (sign pairing
// ill-conditioned).
AoaEstimate extract_aoa(const CorrelationPair& pair, int model_order);

// Shared inversion from response frequencies (f_y = sin(theta)sin(phi),
// f_z = cos(phi)) to a front-hemisphere bearing.
AoaEstimate bearing_from_frequencies(double f_y, double f_z);

} // namespace rris

#endif
