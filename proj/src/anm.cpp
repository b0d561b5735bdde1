// SPDX-License-Identifier: Apache-2.0
#include "rris/anm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rris/units.hpp"

namespace rris {

TwoLevelToeplitz::TwoLevelToeplitz(int elements_y, int elements_z)
    : my_(elements_y), mz_(elements_z),
      gen_(MatC::Zero(2 * elements_y - 1, 2 * elements_z - 1)) {
    if (elements_y < 1 || elements_z < 1)
        throw std::invalid_argument("TwoLevelToeplitz: element counts must be >= 1");
}

MatC TwoLevelToeplitz::assemble() const {
    const int m = my_ * mz_;
    MatC out(m, m);
    for (int my = 0; my < my_; ++my)
        for (int mz = 0; mz < mz_; ++mz)
            for (int ny = 0; ny < my_; ++ny)
                for (int nz = 0; nz < mz_; ++nz)
                    out(my * mz_ + mz, ny * mz_ + nz) = at(my - ny, mz - nz);
    return out;
}

double TwoLevelToeplitz::trace() const {
    return my_ * mz_ * at(0, 0).real();
}

TwoLevelToeplitz TwoLevelToeplitz::project(const MatC& dense, int elements_y, int elements_z) {
    const int m = elements_y * elements_z;
    if (dense.rows() != m || dense.cols() != m)
        throw std::invalid_argument("TwoLevelToeplitz::project: dimension mismatch");
    const MatC h = 0.5 * (dense + dense.adjoint());
    TwoLevelToeplitz out(elements_y, elements_z);
    MatC counts = MatC::Zero(2 * elements_y - 1, 2 * elements_z - 1);
    for (int my = 0; my < elements_y; ++my)
        for (int mz = 0; mz < elements_z; ++mz)
            for (int ny = 0; ny < elements_y; ++ny)
                for (int nz = 0; nz < elements_z; ++nz) {
                    out.at(my - ny, mz - nz) += h(my * elements_z + mz, ny * elements_z + nz);
                    counts(my - ny + elements_y - 1, mz - nz + elements_z - 1) += 1.0;
                }
    for (int ky = -(elements_y - 1); ky <= elements_y - 1; ++ky)
        for (int kz = -(elements_z - 1); kz <= elements_z - 1; ++kz)
            out.at(ky, kz) /= counts(ky + elements_y - 1, kz + elements_z - 1).real();
    out.at(0, 0) = Cplx(out.at(0, 0).real(), 0.0);
    return out;
}

double TwoLevelToeplitz::symmetry_error() const {
    double worst = 0.0;
    for (int ky = -(my_ - 1); ky <= my_ - 1; ++ky)
        for (int kz = -(mz_ - 1); kz <= mz_ - 1; ++kz)
            worst = std::max(worst, std::abs(at(-ky, -kz) - std::conj(at(ky, kz))));
    return worst;
}

double regularization_weight(double noise_std, int elements, double c) {
    if (noise_std <= 0.0 || elements < 1)
        throw std::domain_error("regularization_weight: sigma and M must be positive");
    return c * noise_std * std::sqrt(elements * std::log(static_cast<double>(elements)));
}

namespace {

struct Snapshot {
    VecC h;
    MatC toep_block;
    double t = 0.0;
    double objective = std::numeric_limits<double>::infinity();
    bool taken = false;
};

} // namespace

AnmSolution solve_anm(const AnmProblem& problem, const AnmOptions& opts) {
    const int m = problem.elements_y * problem.elements_z;
    const int slots = static_cast<int>(problem.y.size());
    if (problem.w.rows() != m || problem.w.cols() != slots)
        throw std::invalid_argument("solve_anm: combiner shape does not match y and dims");
    if (problem.mu <= 0.0)
        throw std::invalid_argument("solve_anm: mu must be positive");

    AnmSolution out;
    out.toeplitz = TwoLevelToeplitz(problem.elements_y, problem.elements_z);
    out.h_hat = VecC::Zero(m);

    const MatC a = std::sqrt(problem.tx_power) * problem.w.adjoint(); // K x M
    const VecC aty0 = a.adjoint() * problem.y;
    if (aty0.norm() == 0.0) {
        out.status = AnmStatus::Converged;
        return out;
    }

    // Solve in y-scaled units so the absolute tolerances are meaningful at
    // the tiny physical channel magnitudes.
    const MatC gram = a.adjoint() * a;
    const double ridge = 1e-12 * gram.trace().real() / m;
    const double scale =
        (MatC(gram + ridge * MatC::Identity(m, m)).ldlt().solve(aty0)).norm();
    const VecC y = problem.y / scale;
    const double mu = problem.mu / scale;
    const double rho = opts.rho;

    const Eigen::LDLT<MatC> h_solver(gram + 2.0 * rho * MatC::Identity(m, m));
    const VecC aty = a.adjoint() * y;

    const int n = m + 1;
    MatC z = MatC::Zero(n, n);
    MatC lambda = MatC::Zero(n, n);
    MatC s = MatC::Zero(n, n);

    VecC h = VecC::Zero(m);
    TwoLevelToeplitz u(problem.elements_y, problem.elements_z);
    double t = 0.0;

    // mu * (Tr(Toep(U))/(2M) + t/2) + data fit; the trace term reduces to u0/2.
    const auto objective_of = [&](const VecC& hv, double u0, double tv) {
        return mu * 0.5 * (u0 + tv) + 0.5 * (y - a * hv).squaredNorm();
    };

    Snapshot best;
    std::ofstream trace;
    if (opts.trace_path)
        trace.open(*opts.trace_path);
    if (trace.is_open())
        trace << "iter,objective,best_objective,primal_residual,dual_residual\n";

    double r_norm = 0.0, s_norm = 0.0;
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        // x-update against Q = Z - Lambda/rho.
        const MatC q = 0.5 * ((z - lambda / rho) + (z - lambda / rho).adjoint());
        t = q(m, m).real() - mu / (2.0 * rho);
        h = h_solver.solve(aty + 2.0 * rho * q.block(0, m, m, 1));
        u = TwoLevelToeplitz::project(q.topLeftCorner(m, m), problem.elements_y,
                                      problem.elements_z);
        u.at(0, 0) -= mu / (2.0 * rho * m);

        s.topLeftCorner(m, m) = u.assemble();
        s.block(0, m, m, 1) = h;
        s.block(m, 0, 1, m) = h.adjoint();
        s(m, m) = t;

        // Track the best PSD-feasible iterate by objective.
        Eigen::SelfAdjointEigenSolver<MatC> feas(s, Eigen::EigenvaluesOnly);
        const double ref = std::max({std::abs(feas.eigenvalues().maxCoeff()), std::abs(t), 1e-30});
        if (feas.eigenvalues().minCoeff() >= -1e-6 * ref) {
            const double obj = objective_of(h, u.at(0, 0).real(), t);
            if (obj < best.objective) {
                best.h = h;
                best.toep_block = s.topLeftCorner(m, m);
                best.t = t;
                best.objective = obj;
                best.taken = true;
            }
        }

        // Z-update: PSD projection.
        const MatC v = 0.5 * ((s + lambda / rho) + (s + lambda / rho).adjoint());
        Eigen::SelfAdjointEigenSolver<MatC> eig(v);
        Eigen::VectorXd evals = eig.eigenvalues().cwiseMax(0.0);
        const MatC z_prev = z;
        z = eig.eigenvectors() * evals.asDiagonal() * eig.eigenvectors().adjoint();

        lambda += rho * (s - z);

        r_norm = (s - z).norm();
        s_norm = rho * (z - z_prev).norm();
        if (trace.is_open())
            trace << iter << ',' << objective_of(h, u.at(0, 0).real(), t) << ','
                  << best.objective << ',' << r_norm << ',' << s_norm << '\n';

        const double eps_pri = n * opts.eps_abs + opts.eps_rel * std::max(s.norm(), z.norm());
        const double eps_dual = n * opts.eps_abs + opts.eps_rel * lambda.norm();
        if (r_norm <= eps_pri && s_norm <= eps_dual) {
            out.status = AnmStatus::Converged;
            ++iter;
            break;
        }
    }

    out.iterations = iter;
    out.primal_residual = r_norm;
    out.dual_residual = s_norm;

    const VecC h_sel = best.taken ? best.h : h;
    const MatC toep_sel = best.taken ? best.toep_block : s.topLeftCorner(m, m);
    const double t_sel = best.taken ? best.t : t;

    out.h_hat = scale * h_sel;
    out.toeplitz = TwoLevelToeplitz::project(scale * toep_sel, problem.elements_y,
                                             problem.elements_z);
    out.t = scale * t_sel;
    out.objective =
        problem.mu * 0.5 * (out.toeplitz.trace() / m + out.t) +
        0.5 * (problem.y - a * out.h_hat).squaredNorm();
    return out;
}

} // namespace rris
