// SPDX-License-Identifier: Apache-2.0
#include "rris/music.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rris/geometry.hpp"

namespace rris {

CorrelationPair decompose(const VecC& h_hat, int elements_y, int elements_z) {
    if (h_hat.size() != static_cast<Eigen::Index>(elements_y) * elements_z)
        throw std::invalid_argument("decompose: vector length must equal elements_y * elements_z");
    const MatC corr = h_hat * h_hat.adjoint();

    MatC c_z = MatC::Zero(elements_z, elements_z);
    for (int my = 0; my < elements_y; ++my)
        c_z += corr.block(my * elements_z, my * elements_z, elements_z, elements_z);

    MatC c_y = MatC::Zero(elements_y, elements_y);
    for (int m = 0; m < elements_z; ++m)
        for (int r = 0; r < elements_y; ++r)
            for (int s = 0; s < elements_y; ++s)
                c_y(r, s) += corr(r * elements_z + m, s * elements_z + m);

    CorrelationPair out;
    out.c_z = 0.5 * (c_z + c_z.adjoint());
    out.c_y = 0.5 * (c_y + c_y.adjoint());
    return out;
}

namespace {

// Roots via the companion matrix of the (trimmed) polynomial.
std::vector<Cplx> polynomial_roots(std::vector<Cplx> coeffs) {
    // coeffs[k] multiplies z^k; trim negligible leading/trailing terms.
    double cmax = 0.0;
    for (const Cplx& c : coeffs)
        cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0)
        return {};
    const double tol = 1e-14 * cmax;
    std::size_t lo = 0;
    while (lo < coeffs.size() && std::abs(coeffs[lo]) <= tol)
        ++lo; // roots at z = 0 are irrelevant for frequencies
    std::size_t hi = coeffs.size();
    while (hi > lo && std::abs(coeffs[hi - 1]) <= tol)
        --hi;
    if (hi - lo < 2)
        return {};
    const std::vector<Cplx> p(coeffs.begin() + lo, coeffs.begin() + hi);
    const std::size_t deg = p.size() - 1;
    MatC companion = MatC::Zero(deg, deg);
    for (std::size_t i = 0; i + 1 < deg; ++i)
        companion(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        companion(i, deg - 1) = -p[i] / p[deg];
    Eigen::ComplexEigenSolver<MatC> eig(companion, false);
    std::vector<Cplx> roots(eig.eigenvalues().data(), eig.eigenvalues().data() + deg);
    return roots;
}

// Refine a frequency by minimizing the null spectrum
// q(f) = sum_k gamma_k e^{j pi f k} (real, nonnegative); signal frequencies
// are double zeros, so Newton runs on q' with a q'' safeguard. The raw
// companion eigenvalues only locate them to ~1e-9.
double refine_frequency(const std::vector<Cplx>& gamma, int n, double f) {
    const auto eval = [&](double x) {
        double q = gamma[n - 1].real(), dq = 0.0, ddq = 0.0;
        for (int k = 1; k <= n - 1; ++k) {
            const Cplx e = gamma[k + n - 1] * std::polar(1.0, kPi * x * k);
            q += 2.0 * e.real();
            dq += 2.0 * (Cplx(0.0, kPi * k) * e).real();
            ddq += 2.0 * (Cplx(0.0, kPi * k) * Cplx(0.0, kPi * k) * e).real();
        }
        return std::array<double, 3>{q, dq, ddq};
    };
    double best = f;
    double best_q = eval(f)[0];
    double x = f;
    for (int step = 0; step < 8; ++step) {
        const auto [q, dq, ddq] = eval(x);
        if (ddq <= 0.0)
            break;
        const double delta = dq / ddq;
        if (std::abs(delta) > 1.0 / n)
            break; // refinement must stay inside the local valley
        x -= delta;
        const double qx = eval(x)[0];
        if (qx < best_q) {
            best_q = qx;
            best = x;
        }
        if (std::abs(delta) < 1e-15)
            break;
    }
    return best;
}

// Per-frequency component powers from a least-squares fit of the steering
// dictionary to the correlation matrix.
std::vector<double> fitted_powers(const MatC& corr, const std::vector<double>& freqs) {
    const int n = static_cast<int>(corr.rows());
    const int l = static_cast<int>(freqs.size());
    MatC a(n, l);
    for (int c = 0; c < l; ++c)
        for (int m = 0; m < n; ++m)
            a(m, c) = std::polar(1.0, kPi * m * freqs[c]);
    // Pseudo-inverse via SVD; nearly duplicate frequencies stay harmless.
    Eigen::JacobiSVD<MatC> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-10 * sv(0))
            inv(k) = 1.0 / sv(k);
    const MatC pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    const MatC x = pinv * corr * pinv.adjoint();
    std::vector<double> powers(l);
    for (int c = 0; c < l; ++c)
        powers[c] = x(c, c).real();
    return powers;
}

} // namespace

std::vector<double> root_music(const MatC& corr, int model_order) {
    const int n = static_cast<int>(corr.rows());
    if (corr.cols() != n)
        throw std::invalid_argument("root_music: correlation matrix must be square");
    if (model_order < 1 || model_order >= n)
        throw std::invalid_argument("root_music: model order must satisfy 1 <= L < N");

    Eigen::SelfAdjointEigenSolver<MatC> eig(0.5 * (corr + corr.adjoint()));
    const MatC noise = eig.eigenvectors().leftCols(n - model_order); // ascending eigenvalues
    const MatC g = noise * noise.adjoint();

    // Coefficient of z^(k + n - 1) is the k-th superdiagonal sum of G.
    std::vector<Cplx> coeffs(2 * n - 1, Cplx(0.0, 0.0));
    for (int k = -(n - 1); k <= n - 1; ++k) {
        Cplx sum(0.0, 0.0);
        for (int m = std::max(0, -k); m < n && m + k < n; ++m)
            sum += g(m, m + k);
        coeffs[k + n - 1] = sum;
    }

    std::vector<Cplx> roots = polynomial_roots(coeffs);
    std::vector<Cplx> inside;
    for (const Cplx& r : roots)
        if (std::abs(r) < 1.0 && std::abs(r) > 1e-12)
            inside.push_back(r);
    std::sort(inside.begin(), inside.end(),
              [](const Cplx& a, const Cplx& b) { return std::abs(a) > std::abs(b); });

    std::vector<double> freqs;
    for (int l = 0; l < model_order && l < static_cast<int>(inside.size()); ++l)
        freqs.push_back(refine_frequency(coeffs, n, std::arg(inside[l]) / kPi));
    // Degenerate spectra can yield fewer usable roots; pad by repeating the
    // strongest so callers always see model_order entries.
    while (static_cast<int>(freqs.size()) < model_order)
        freqs.push_back(freqs.empty() ? 0.0 : freqs.front());
    return freqs;
}

AoaEstimate bearing_from_frequencies(double f_y, double f_z) {
    AoaEstimate out;
    const double cp = std::clamp(f_z, 0.0, 1.0); // cos(phi) >= 0 for |phi| <= pi/2
    const double sp = std::sqrt(std::max(0.0, 1.0 - cp * cp));
    out.reliable = sp >= 0.05;
    const double sin_theta = sp > 1e-12 ? std::clamp(f_y / sp, -1.0, 1.0) : 0.0;
    out.reliable = out.reliable && std::abs(sin_theta) >= 0.05;

    // Canonical branch (xi_z >= 0, xi_x >= 0), then fold to the covered
    // front hemisphere. B = I - xi xi^T is even in xi, so fusion sees the
    // same line either way.
    Vec3 xi(std::sqrt(std::max(0.0, 1.0 - sin_theta * sin_theta)) * cp, sin_theta * cp, sp);
    if (xi.x() > 0.0)
        xi = -xi;
    out.theta_hat = std::atan2(xi.y(), xi.x());
    out.phi_hat = std::asin(std::clamp(xi.z(), -1.0, 1.0));
    return out;
}

AoaEstimate extract_aoa(const CorrelationPair& pair, int model_order) {
    const std::vector<double> fz = root_music(pair.c_z, model_order);
    const std::vector<double> fy = root_music(pair.c_y, model_order);
    const std::vector<double> pz = fitted_powers(pair.c_z, fz);
    const std::vector<double> py = fitted_powers(pair.c_y, fy);

    const auto argmax = [](const std::vector<double>& v) {
        return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    const std::size_t iz = argmax(pz);
    const std::size_t iy = argmax(py);

    AoaEstimate out = bearing_from_frequencies(fy[iy], fz[iz]);
    out.component_power = std::min(pz[iz], py[iy]);
    return out;
}

} // namespace rris
