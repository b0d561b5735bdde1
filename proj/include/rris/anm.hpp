// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_ANM_HPP
#define RRIS_ANM_HPP

#include <optional>
#include <string>

#include "rris/channel.hpp"

namespace rris {

// Generator of a 2-level Toeplitz matrix: g(k_y, k_z) for k_y in
// (-M_y, M_y), k_z in (-M_z, M_z), conjugate-symmetric g(-k) = g(k)*.
// Entry ((m_y, m_z), (m_y', m_z')) of the assembled matrix is
// g(m_y - m_y', m_z - m_z'); the y index is the slow (outer) axis, matching
// the steering Kronecker ordering.
class TwoLevelToeplitz {
  public:
    TwoLevelToeplitz(int elements_y, int elements_z);

    int elements_y() const { return my_; }
    int elements_z() const { return mz_; }

    Cplx& at(int ky, int kz) { return gen_(ky + my_ - 1, kz + mz_ - 1); }
    const Cplx& at(int ky, int kz) const { return gen_(ky + my_ - 1, kz + mz_ - 1); }

    MatC assemble() const;
    double trace() const; // M * Re g(0,0)

    // Least-squares structure projection: per-offset averages of a dense
    // Hermitian(ized) matrix.
    static TwoLevelToeplitz project(const MatC& dense, int elements_y, int elements_z);

    // Worst conjugate-symmetry violation |g(-k) - g(k)*| over all offsets.
    double symmetry_error() const;

  private:
    int my_, mz_;
    MatC gen_; // (2My-1) x (2Mz-1)
};

struct AnmProblem {
    VecC y;             // K measurements
    MatC w;             // M x K combiner
    double tx_power = 1.0; // linear (mW-normalized)
    double mu = 1e-3;   // regularization weight
    int elements_y = 4;
    int elements_z = 4;
};

struct AnmOptions {
    int max_iter = 5000;
    double eps_abs = 1e-6;
    double eps_rel = 1e-5;
    double rho = 1.0;
    std::optional<std::string> trace_path; // CSV: iter, objective, best, residuals
};

enum class AnmStatus { Converged, MaxIter };

struct AnmSolution {
    VecC h_hat;
    TwoLevelToeplitz toeplitz{1, 1};
    double t = 0.0;
    AnmStatus status = AnmStatus::MaxIter;
    double primal_residual = 0.0; // in the solver's normalized units
    double dual_residual = 0.0;
    int iterations = 0;
    double objective = 0.0; // mu*||h||_A surrogate + 0.5*||y - sqrt(P) W^H h||^2
};

// mu = c * sigma * sqrt(M ln M).
double regularization_weight(double noise_std, int elements, double c = 1.0);

// Regularized atomic-norm denoising via ADMM with a PSD projection of the
// arrowed [[Toep(U), h], [h^H, t]] block each iteration. The problem is
// solved in y-scaled units; the returned solution is the best PSD-feasible
// iterate by objective, so the reported objective trace is non-increasing.
AnmSolution solve_anm(const AnmProblem& problem, const AnmOptions& opts = {});

} // namespace rris

#endif
