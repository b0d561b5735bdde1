// SPDX-License-Identifier: Apache-2.0
#ifndef RRIS_CRLB_HPP
#define RRIS_CRLB_HPP

#include <vector>

#include "rris/channel.hpp"
#include "rris/measurement.hpp"

namespace rris {

// Partial derivatives of mu = W^H h with respect to one path's parameters.
struct PathPartials {
    VecC dtheta;
    VecC dphi;
    VecC ddist;
};

using MuPartials = std::vector<PathPartials>;

// Derivatives of the combined observation for every path of one subarray.
// The diagonal derivative matrices carry phases j*pi*(m-1)*(...), which
// presupposes lambda/2 element spacing; any other spacing is rejected.
MuPartials mu_partials(const SubarrayPaths& paths, const SubarrayConfig& config,
                       const MatC& combiner, double wavelength_m);

// Stacks the partials into the K x 3L derivative matrix, columns ordered
// [theta_1, phi_1, d_1, ..., theta_L, phi_L, d_L].
MatC partials_matrix(const MuPartials& partials);

struct FimReport {
    Eigen::MatrixXd matrix;         // real 3L x 3L, (2P/sigma^2) Re{G^H G}
    bool overhead_sufficient = true; // K >= 3L, necessary for a nonsingular FIM
};

FimReport fim(const MuPartials& partials, double tx_power_dbm, double noise_var_dbm);

// CRLB block for the LoS angles: (sigma^2 / 2P) (G1^H (I - P_G2) G1)^{-1}
// with G1 the LoS angle partials and G2 everything else. The projector is
// formed from a rank-revealing factorization of G2; an (numerically)
// singular Schur complement is reported as an infinite bound.
struct LosBound {
    Eigen::Matrix2cd bound = Eigen::Matrix2cd::Zero(); // covariance lower bound
    Eigen::Matrix2cd angle_fim = Eigen::Matrix2cd::Zero(); // (2P/sigma^2) Schur complement
    double eps_theta = 0.0; // bound(0,0), rad^2
    double eps_phi = 0.0;   // bound(1,1), rad^2
    bool infinite = false;
};

LosBound los_bound(const MuPartials& partials, double tx_power_dbm, double noise_var_dbm);

// Jacobian d[theta, phi]/d p_MS; degenerate (and zero azimuth column) at
// |phi| = pi/2 where azimuth is undefined.
struct JacobianT {
    Eigen::Matrix<double, 3, 2> t = Eigen::Matrix<double, 3, 2>::Zero();
    bool degenerate = false;
};

JacobianT jacobian(double theta, double phi, double dist);

// Position error bound sqrt(Tr{(sum_i T_i J_i T_i^T)^{-1}}) in meters;
// +infinity when the accumulated information is singular.
double peb_from_bounds(const std::vector<Eigen::Matrix2cd>& angle_fims,
                       const std::vector<JacobianT>& jacobians);

// Full pipeline over a scene: partials -> LoS bounds -> Jacobians -> PEB.
// Combiners are per subarray; a single entry is shared by all subarrays.
double peb(const Scene& scene, const PathSet& paths, const std::vector<MatC>& combiners,
           double tx_power_dbm, double noise_var_dbm);

// Single-subarray position error variance for diagonal angle bounds:
// eps_theta d^2 cos^2(phi) + eps_phi d^2 (meters^2).
double error_decomposition(double eps_theta, double eps_phi, double dist, double phi);

struct NlosBoundPoint {
    double delta = 0.0;        // radians
    double theta_bound = 0.0;  // two-path LoS azimuth bound, rad^2
    double phi_bound = 0.0;    // two-path LoS elevation bound, rad^2
    double theta_single = 0.0; // single-path references, rad^2
    double phi_single = 0.0;
};

// LoS angle bounds at subarray 0 versus the LoS/NLoS angle difference.
// For delta_spread > 0 the two-path bound is averaged over
// delta_hat ~ U[delta - spread, delta + spread] (open midpoint rule,
// 65 nodes), matching a randomized angle-difference study.
std::vector<NlosBoundPoint> nlos_effect_curve(const Scene& scene,
                                              const std::vector<double>& delta_grid,
                                              double delta_spread, const MatC& combiner,
                                              double tx_power_dbm, double noise_var_dbm,
                                              double power_ratio_db = 20.0);

} // namespace rris

#endif
