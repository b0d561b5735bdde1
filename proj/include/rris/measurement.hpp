// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_MEASUREMENT_HPP
#define RRIS_MEASUREMENT_HPP

#include <cstdint>

#include "rris/channel.hpp"

namespace rris {

enum class CombinerKind { Dft, RandomPhase };

// Per-subarray pilot observation y = sqrt(P) W^H h + n.
struct MeasurementSet {
    MatC combiner;      // M x K, unit-modulus entries
    VecC received;      // K
    double tx_power_dbm = 0.0;
    double noise_var_dbm = -104.0;
    int slots = 0;      // K
};

// Thermal noise floor -174 dBm/Hz over B MHz.
double noise_variance_dbm(double bandwidth_mhz);

// First K columns of the N-point DFT with N = max(M, K). For K <= M the
// columns are mutually orthogonal; for K > M the rows are the first M rows
// of the K-point DFT, keeping every entry unit modulus.
MatC dft_combiner(int elements, int slots);

// Entries exp(j psi) with psi ~ U[0, 2 pi), deterministic under the seed.
MatC random_phase_combiner(int elements, int slots, std::uint64_t seed);

// Noisy received vector. Powers are dBm at this boundary and linear inside.
VecC receive(const VecC& channel, const MatC& combiner, double tx_power_dbm,
             double noise_var_dbm, std::uint64_t seed);

// Bundles one subarray's pilot observation with its combiner and powers.
MeasurementSet measure(const VecC& channel, MatC combiner, double tx_power_dbm,
                       double noise_var_dbm, std::uint64_t seed);

} // namespace rris

#endif
