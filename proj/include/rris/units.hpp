// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_UNITS_HPP
#define RRIS_UNITS_HPP

#include <cmath>
#include <stdexcept>

namespace rris {

// Speed of light in m/s (CODATA exact value).
inline constexpr double kSpeedOfLight = 2.99792458e8;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// All internal power arithmetic is milliwatt-normalized: dBm values convert
// to linear mW once at the boundary and stay linear afterwards.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) {
    if (mw <= 0.0)
        throw std::domain_error("mw_to_dbm: power must be positive");
    return 10.0 * std::log10(mw);
}

inline double wavelength_m(double carrier_freq_ghz) {
    if (carrier_freq_ghz <= 0.0)
        throw std::domain_error("wavelength_m: carrier frequency must be positive");
    return kSpeedOfLight / (carrier_freq_ghz * 1e9);
}

} // namespace rris

#endif
