// SPDX-License-Identifier: Apache-2.0
#include "rris/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "rris/rng.hpp"

namespace rris {

double noise_variance_dbm(double bandwidth_mhz) {
    if (bandwidth_mhz <= 0.0)
        throw std::domain_error("noise_variance_dbm: bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(1e6 * bandwidth_mhz);
}

MatC dft_combiner(int elements, int slots) {
    if (elements < 1 || slots < 1)
        throw std::invalid_argument("dft_combiner: dimensions must be >= 1");
    const int n = std::max(elements, slots);
    MatC w(elements, slots);
    for (int m = 0; m < elements; ++m)
        for (int k = 0; k < slots; ++k)
            w(m, k) = std::polar(1.0, -2.0 * kPi * m * k / n);
    return w;
}

MatC random_phase_combiner(int elements, int slots, std::uint64_t seed) {
    if (elements < 1 || slots < 1)
        throw std::invalid_argument("random_phase_combiner: dimensions must be >= 1");
    Rng rng(seed);
    MatC w(elements, slots);
    for (int k = 0; k < slots; ++k)
        for (int m = 0; m < elements; ++m)
            w(m, k) = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    return w;
}

VecC receive(const VecC& channel, const MatC& combiner, double tx_power_dbm,
             double noise_var_dbm, std::uint64_t seed) {
    if (combiner.rows() != channel.size())
        throw std::invalid_argument("receive: combiner rows must match channel length");
    const double amp = std::sqrt(dbm_to_mw(tx_power_dbm));
    const double noise_std = std::sqrt(dbm_to_mw(noise_var_dbm));
    VecC y = amp * (combiner.adjoint() * channel);
    Rng rng(seed);
    for (Eigen::Index k = 0; k < y.size(); ++k)
        y(k) += noise_std * rng.cnormal();
    return y;
}

MeasurementSet measure(const VecC& channel, MatC combiner, double tx_power_dbm,
                       double noise_var_dbm, std::uint64_t seed) {
    MeasurementSet out;
    out.received = receive(channel, combiner, tx_power_dbm, noise_var_dbm, seed);
    out.combiner = std::move(combiner);
    out.tx_power_dbm = tx_power_dbm;
    out.noise_var_dbm = noise_var_dbm;
    out.slots = static_cast<int>(out.received.size());
    return out;
}

} // namespace rris
