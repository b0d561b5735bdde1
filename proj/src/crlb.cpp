// SPDX-License-Identifier: Apache-2.0
#include "rris/crlb.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rris {

namespace {

void require_half_wavelength(const SubarrayConfig& config, double wavelength_m) {
    const double half = 0.5 * wavelength_m;
    if (std::abs(config.spacing_y - half) > 1e-9 * wavelength_m ||
        std::abs(config.spacing_z - half) > 1e-9 * wavelength_m)
        throw std::invalid_argument(
            "mu_partials: derivative matrices assume lambda/2 element spacing");
}

// Orthogonal projector onto the column space of g, rank-revealed by SVD with
// tolerance 1e-10 * sigma_max. The Gram-inverse form is avoided: it breaks
// down exactly in the near-collinear regime studied by the NLoS analysis.
MatC column_space_projector(const MatC& g) {
    if (g.cols() == 0)
        return MatC::Zero(g.rows(), g.rows());
    Eigen::JacobiSVD<MatC> svd(g, Eigen::ComputeThinU);
    const double smax = svd.singularValues()(0);
    const double tol = 1e-10 * std::max(smax, 1e-300);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > tol)
            ++rank;
    if (rank == 0)
        return MatC::Zero(g.rows(), g.rows());
    const MatC u = svd.matrixU().leftCols(rank);
    return u * u.adjoint();
}

} // namespace

MuPartials mu_partials(const SubarrayPaths& paths, const SubarrayConfig& config,
                       const MatC& combiner, double wavelength_m) {
    require_half_wavelength(config, wavelength_m);
    if (combiner.rows() != config.element_count())
        throw std::invalid_argument("mu_partials: combiner rows must match element count");

    MuPartials out;
    out.reserve(paths.size());
    for (const PathEntry& p : paths) {
        const VecC ay = steering_y(p.theta, p.phi, config.elements_y, config.spacing_y, wavelength_m);
        const VecC az = steering_z(p.phi, config.elements_z, config.spacing_z, wavelength_m);
        VecC h(config.element_count());
        VecC dh_theta(config.element_count());
        VecC dh_phi(config.element_count());
        const double st = std::sin(p.theta), ct = std::cos(p.theta);
        const double sp = std::sin(p.phi), cp = std::cos(p.phi);
        for (int my = 0; my < config.elements_y; ++my) {
            for (int mz = 0; mz < config.elements_z; ++mz) {
                const Cplx hv = p.gain * ay(my) * az(mz);
                const int idx = my * config.elements_z + mz;
                h(idx) = hv;
                dh_theta(idx) = Cplx(0.0, kPi * my * ct * sp) * hv;
                dh_phi(idx) = Cplx(0.0, kPi * (my * st * cp - mz * sp)) * hv;
            }
        }
        PathPartials partials;
        partials.dtheta = combiner.adjoint() * dh_theta;
        partials.dphi = combiner.adjoint() * dh_phi;
        partials.ddist = (Cplx(-1.0, -kPi) / p.dist) * (combiner.adjoint() * h);
        out.push_back(std::move(partials));
    }
    return out;
}

MatC partials_matrix(const MuPartials& partials) {
    if (partials.empty())
        throw std::invalid_argument("partials_matrix: no paths");
    const Eigen::Index k = partials[0].dtheta.size();
    MatC g(k, 3 * static_cast<Eigen::Index>(partials.size()));
    for (std::size_t l = 0; l < partials.size(); ++l) {
        g.col(3 * l + 0) = partials[l].dtheta;
        g.col(3 * l + 1) = partials[l].dphi;
        g.col(3 * l + 2) = partials[l].ddist;
    }
    return g;
}

FimReport fim(const MuPartials& partials, double tx_power_dbm, double noise_var_dbm) {
    const MatC g = partials_matrix(partials);
    const double scale = 2.0 * dbm_to_mw(tx_power_dbm) / dbm_to_mw(noise_var_dbm);
    FimReport report;
    report.matrix = scale * (g.adjoint() * g).real();
    report.matrix = 0.5 * (report.matrix + report.matrix.transpose()).eval();
    report.overhead_sufficient = g.rows() >= g.cols();
    return report;
}

LosBound los_bound(const MuPartials& partials, double tx_power_dbm, double noise_var_dbm) {
    const MatC g = partials_matrix(partials);
    const Eigen::Index k = g.rows();
    MatC g1(k, 2);
    g1.col(0) = g.col(0);
    g1.col(1) = g.col(1);
    const MatC g2 = g.rightCols(g.cols() - 2);

    const MatC proj = column_space_projector(g2);
    const Eigen::Matrix2cd schur =
        (g1.adjoint() * (MatC::Identity(k, k) - proj) * g1).eval();

    LosBound out;
    const double scale = 2.0 * dbm_to_mw(tx_power_dbm) / dbm_to_mw(noise_var_dbm);
    out.angle_fim = scale * schur;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(schur);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmin > 0.0) || lmin < 1e-12 * lmax) {
        out.infinite = true;
        out.eps_theta = std::numeric_limits<double>::infinity();
        out.eps_phi = std::numeric_limits<double>::infinity();
        return out;
    }
    out.bound = schur.inverse() / scale;
    out.eps_theta = out.bound(0, 0).real();
    out.eps_phi = out.bound(1, 1).real();
    return out;
}

JacobianT jacobian(double theta, double phi, double dist) {
    if (dist <= 0.0)
        throw std::domain_error("jacobian: distance must be positive");
    JacobianT out;
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    if (std::abs(cp) < 1e-9) {
        out.degenerate = true;
    } else {
        out.t(0, 0) = -st / (dist * cp);
        out.t(1, 0) = ct / (dist * cp);
        out.t(2, 0) = 0.0;
    }
    out.t(0, 1) = -ct * sp / dist;
    out.t(1, 1) = -st * sp / dist;
    out.t(2, 1) = cp / dist;
    return out;
}

double peb_from_bounds(const std::vector<Eigen::Matrix2cd>& angle_fims,
                       const std::vector<JacobianT>& jacobians) {
    if (angle_fims.size() != jacobians.size() || angle_fims.empty())
        throw std::invalid_argument("peb_from_bounds: mismatched or empty inputs");
    Eigen::Matrix3cd info = Eigen::Matrix3cd::Zero();
    for (std::size_t i = 0; i < angle_fims.size(); ++i) {
        const Eigen::Matrix<double, 3, 2>& t = jacobians[i].t;
        info += t.cast<Cplx>() * angle_fims[i] * t.transpose().cast<Cplx>();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(info);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmin > 0.0) || lmin < 1e-12 * lmax)
        return std::numeric_limits<double>::infinity();
    double trace_inv = 0.0;
    for (int k = 0; k < 3; ++k)
        trace_inv += 1.0 / eig.eigenvalues()(k);
    return std::sqrt(trace_inv);
}

double peb(const Scene& scene, const PathSet& paths, const std::vector<MatC>& combiners,
           double tx_power_dbm, double noise_var_dbm) {
    const int n = scene.subarray_count();
    if (static_cast<int>(paths.per_subarray.size()) != n)
        throw std::invalid_argument("peb: path set does not match scene");
    if (combiners.empty())
        throw std::invalid_argument("peb: no combiner given");
    std::vector<Eigen::Matrix2cd> fims;
    std::vector<JacobianT> jacobians;
    for (int i = 0; i < n; ++i) {
        const MatC& w = combiners.size() == 1 ? combiners[0] : combiners.at(i);
        const MuPartials partials =
            mu_partials(paths.per_subarray[i], scene.subarrays[i], w, scene.wavelength);
        const LosBound bound = los_bound(partials, tx_power_dbm, noise_var_dbm);
        if (bound.infinite)
            return std::numeric_limits<double>::infinity();
        const PathEntry& los = paths.per_subarray[i][0];
        fims.push_back(bound.angle_fim);
        jacobians.push_back(jacobian(los.theta, los.phi, los.dist));
    }
    return peb_from_bounds(fims, jacobians);
}

double error_decomposition(double eps_theta, double eps_phi, double dist, double phi) {
    const double cp = std::cos(phi);
    return eps_theta * dist * dist * cp * cp + eps_phi * dist * dist;
}

std::vector<NlosBoundPoint> nlos_effect_curve(const Scene& scene,
                                              const std::vector<double>& delta_grid,
                                              double delta_spread, const MatC& combiner,
                                              double tx_power_dbm, double noise_var_dbm,
                                              double power_ratio_db) {
    if (scene.subarray_count() < 1)
        throw std::invalid_argument("nlos_effect_curve: empty scene");

    ScenarioConfig single;
    single.num_paths = 1;
    const PathSet los_only = make_two_path(scene, single, 0);
    const MuPartials single_partials =
        mu_partials(los_only.per_subarray[0], scene.subarrays[0], combiner, scene.wavelength);
    const LosBound single_bound = los_bound(single_partials, tx_power_dbm, noise_var_dbm);

    const auto two_path_bound = [&](double delta_hat) {
        ScenarioConfig cfg;
        cfg.num_paths = 2;
        cfg.delta = delta_hat;
        cfg.delta_spread = 0.0;
        cfg.power_ratio_db = power_ratio_db;
        const PathSet paths = make_two_path(scene, cfg, 0);
        const MuPartials partials =
            mu_partials(paths.per_subarray[0], scene.subarrays[0], combiner, scene.wavelength);
        return los_bound(partials, tx_power_dbm, noise_var_dbm);
    };

    std::vector<NlosBoundPoint> out;
    out.reserve(delta_grid.size());
    for (double delta : delta_grid) {
        NlosBoundPoint point;
        point.delta = delta;
        point.theta_single = single_bound.eps_theta;
        point.phi_single = single_bound.eps_phi;
        if (delta_spread > 0.0) {
            constexpr int kNodes = 65;
            double sum_theta = 0.0, sum_phi = 0.0;
            for (int n = 0; n < kNodes; ++n) {
                const double u = (n + 0.5) / kNodes; // open rule, endpoints excluded
                const LosBound b = two_path_bound(delta - delta_spread +
                                                  2.0 * delta_spread * u);
                sum_theta += b.eps_theta;
                sum_phi += b.eps_phi;
            }
            point.theta_bound = sum_theta / kNodes;
            point.phi_bound = sum_phi / kNodes;
        } else {
            const LosBound b = two_path_bound(delta);
            point.theta_bound = b.eps_theta;
            point.phi_bound = b.eps_phi;
        }
        out.push_back(point);
    }
    return out;
}

} // namespace rris
