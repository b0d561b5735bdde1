// SPDX-License-Identifier: Apache-2.0
#include "rris/ompdict.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rris {

namespace {

VecC atom(double theta, double phi, int elements_y, int elements_z) {
    VecC a(elements_y * elements_z);
    const double fy = std::sin(theta) * std::sin(phi);
    const double fz = std::cos(phi);
    for (int my = 0; my < elements_y; ++my)
        for (int mz = 0; mz < elements_z; ++mz)
            a(my * elements_z + mz) = std::polar(1.0, kPi * (my * fy + mz * fz));
    return a / std::sqrt(static_cast<double>(elements_y * elements_z));
}

} // namespace

AoaEstimate OmpResult::dominant_aoa() const {
    const auto& [theta, phi] = angles.at(dominant);
    return bearing_from_frequencies(std::sin(theta) * std::sin(phi), std::cos(phi));
}

OmpResult omp_estimate(const VecC& y, const MatC& combiner, double tx_power,
                       int elements_y, int elements_z, const GridDictionary& grid,
                       int sparsity) {
    const int m = elements_y * elements_z;
    if (combiner.rows() != m || combiner.cols() != y.size())
        throw std::invalid_argument("omp_estimate: combiner shape does not match y and dims");
    if (sparsity < 1)
        throw std::invalid_argument("omp_estimate: sparsity must be >= 1");
    if (grid.grid_y < 2 || grid.grid_z < 2)
        throw std::invalid_argument("omp_estimate: grid must have at least 2 points per axis");

    const MatC a_sense = std::sqrt(tx_power) * combiner.adjoint(); // K x M

    std::vector<double> theta_grid(grid.grid_y), sin_theta(grid.grid_y), phi_grid(grid.grid_z);
    for (int i = 0; i < grid.grid_y; ++i) {
        theta_grid[i] = kPi * i / (grid.grid_y - 1);
        sin_theta[i] = std::sin(theta_grid[i]);
    }
    for (int j = 0; j < grid.grid_z; ++j)
        phi_grid[j] = -kPi / 2.0 + kPi * j / (grid.grid_z - 1);

    OmpResult out;
    out.h_hat = VecC::Zero(m);
    VecC residual = y;
    MatC selected(y.size(), 0);

    for (int it = 0; it < sparsity; ++it) {
        // Back-project once; all atom correlations reduce to sums over the
        // M_y x M_z grid of g.
        const VecC g = a_sense.adjoint() * residual;
        Eigen::Map<const MatC> gmat(g.data(), elements_z, elements_y); // column-major: z fast

        double best_score = -1.0;
        int best_i = 0, best_j = 0;
        for (int j = 0; j < grid.grid_z; ++j) {
            const double phi = phi_grid[j];
            const Cplx wz = std::polar(1.0, -kPi * std::cos(phi));
            // v(my) = sum_mz conj(az[mz]) g(mz, my)
            Eigen::Matrix<Cplx, Eigen::Dynamic, 1> v(elements_y);
            for (int my = 0; my < elements_y; ++my) {
                Cplx acc(0.0, 0.0);
                Cplx w(1.0, 0.0);
                for (int mz = 0; mz < elements_z; ++mz) {
                    acc += w * gmat(mz, my);
                    w *= wz;
                }
                v(my) = acc;
            }
            const double sphi = std::sin(phi);
            for (int i = 0; i < grid.grid_y; ++i) {
                const Cplx wy = std::polar(1.0, -kPi * sin_theta[i] * sphi);
                Cplx acc(0.0, 0.0);
                Cplx w(1.0, 0.0);
                for (int my = 0; my < elements_y; ++my) {
                    acc += w * v(my);
                    w *= wy;
                }
                const double score = std::norm(acc); // |.|^2, monotone in |.|
                if (score > best_score) {
                    best_score = score;
                    best_i = i;
                    best_j = j;
                }
            }
        }

        // Skip already-selected angles (identical atoms would make the LS
        // refit singular).
        bool duplicate = false;
        for (const auto& [th, ph] : out.angles)
            duplicate = duplicate ||
                        (th == theta_grid[best_i] && ph == phi_grid[best_j]);
        if (duplicate)
            break;

        out.angles.emplace_back(theta_grid[best_i], phi_grid[best_j]);
        const VecC new_col =
            a_sense * atom(theta_grid[best_i], phi_grid[best_j], elements_y, elements_z);
        selected.conservativeResize(Eigen::NoChange, selected.cols() + 1);
        selected.col(selected.cols() - 1) = new_col;

        // LS refit over all selected atoms, then update the residual.
        const VecC coeffs = selected.colPivHouseholderQr().solve(y);
        residual = y - selected * coeffs;

        out.amplitudes.assign(coeffs.size(), 0.0);
        out.h_hat = VecC::Zero(m);
        for (Eigen::Index c = 0; c < coeffs.size(); ++c) {
            out.amplitudes[c] = std::abs(coeffs(c));
            out.h_hat += coeffs(c) *
                         atom(out.angles[c].first, out.angles[c].second, elements_y, elements_z);
        }
    }

    out.residual_norm = residual.norm();
    out.dominant = 0;
    for (std::size_t c = 1; c < out.amplitudes.size(); ++c)
        if (out.amplitudes[c] > out.amplitudes[out.dominant])
            out.dominant = static_cast<int>(c);
    return out;
}

} // namespace rris
