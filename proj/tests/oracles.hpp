#pragma once

// Independent reference implementations used only by the test suites.
// Everything here goes through dense Eigen linear algebra and brute-force
// scans, deliberately avoiding the library's ladder-sum and tridiagonal
// code paths.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "bjj/bjj.hpp"

namespace oracle {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat jz_matrix(int n) {
    Mat m = Mat::Zero(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) m(k, k) = k - 0.5 * n;
    return m;
}

inline Mat jplus_matrix(int n) {
    const double j = 0.5 * n;
    Mat m = Mat::Zero(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
        const double mm = k - j;
        m(k + 1, k) = std::sqrt(j * (j + 1.0) - mm * (mm + 1.0));
    }
    return m;
}

inline Mat jx_matrix(int n) {
    Mat jp = jplus_matrix(n);
    return 0.5 * (jp + jp.adjoint());
}

inline Mat jy_matrix(int n) {
    Mat jp = jplus_matrix(n);
    return (jp - jp.adjoint()) / Cplx(0.0, 2.0);
}

inline Mat dense_hamiltonian(const bjj::SystemParams& p, double omega) {
    Mat jz = jz_matrix(p.particle_count);
    return p.chi * (jz * jz) - omega * jx_matrix(p.particle_count);
}

inline Vec to_vec(const bjj::DickeState& st) {
    Vec v(st.dim());
    for (int k = 0; k < st.dim(); ++k) v(k) = st.amplitudes()[k];
    return v;
}

inline bjj::DickeState to_state(int n, const Vec& v) {
    std::vector<Cplx> amps(v.data(), v.data() + v.size());
    return bjj::DickeState(n, std::move(amps));
}

/// Ground state by dense self-adjoint diagonalization, phase-fixed like
/// the library convention.
inline bjj::DickeState dense_ground_state(const bjj::SystemParams& p, double omega) {
    Eigen::SelfAdjointEigenSolver<Mat> es(dense_hamiltonian(p, omega));
    Vec v = es.eigenvectors().col(0);
    int imax = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    v *= std::conj(v(imax)) / std::abs(v(imax));
    return to_state(p.particle_count, v);
}

/// exp(-i H t) v by dense eigendecomposition.
inline Vec dense_evolve(const Mat& h, const Vec& v, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases(h.rows());
    for (int i = 0; i < h.rows(); ++i)
        phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    return es.eigenvectors() * phases.asDiagonal() *
           (es.eigenvectors().adjoint() * v);
}

/// Minimal normalized variance over a brute-force angle scan in the y-z
/// plane, all moments from dense operator matrices.
inline double angle_scan_min_variance(const bjj::DickeState& st, int n, int n_angles) {
    const Vec v = to_vec(st);
    const Mat jy = jy_matrix(n), jz = jz_matrix(n);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_angles; ++i) {
        const double th = bjj::pi * i / n_angles;
        Mat q = std::cos(th) * jz + std::sin(th) * jy;
        const Cplx mean = v.dot(q * v);
        const Cplx mean2 = v.dot(q * (q * v));
        best = std::min(best, mean2.real() - mean.real() * mean.real());
    }
    return best / (0.25 * n);
}

/// Closed-form minimal y-z variance of a coherent state twisted for time
/// t: with mu = chi t, A = 1 - cos^(N-2)(2 mu), B = 4 sin(mu) cos^(N-2)(mu),
///   xi^2_min = 1 + (N-1)/4 (A - sqrt(A^2 + B^2)).
inline double oat_min_variance_closed_form(int n, double chi_t) {
    const double mu = chi_t;
    const double a = 1.0 - std::pow(std::cos(2.0 * mu), n - 2);
    const double b = 4.0 * std::sin(mu) * std::pow(std::cos(mu), n - 2);
    return 1.0 + 0.25 * (n - 1.0) * (a - std::hypot(a, b));
}

inline bjj::DickeState random_state(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Cplx> amps(n + 1);
    double nrm = 0.0;
    for (auto& a : amps) {
        a = Cplx(gauss(rng), gauss(rng));
        nrm += std::norm(a);
    }
    nrm = std::sqrt(nrm);
    for (auto& a : amps) a /= nrm;
    return bjj::DickeState(n, std::move(amps));
}

}  // namespace oracle
