#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bjj/hamiltonian.hpp"

namespace bjj {

using Complex = std::complex<double>;

/// State of the N-particle two-mode system expanded over the joint
/// eigenbasis |m> of J^2 (with j = N/2) and J_z, m = -N/2 .. N/2.
class DickeState {
public:
    DickeState() = default;

    DickeState(int particle_count, std::vector<Complex> amplitudes)
        : n_(particle_count), amps_(std::move(amplitudes)) {
        if (n_ < 2 || n_ % 2 != 0)
            throw std::domain_error("DickeState: particle count must be even and >= 2");
        if (static_cast<int>(amps_.size()) != n_ + 1)
            throw std::domain_error("DickeState: expected " + std::to_string(n_ + 1) +
                                    " amplitudes");
    }

    int particle_count() const { return n_; }
    int dim() const { return n_ + 1; }

    /// Amplitude c_m; m runs over the integers -N/2 .. N/2.
    Complex amplitude(int m) const { return amps_[index_of(m)]; }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    int index_of(int m) const {
        int idx = m + n_ / 2;
        if (idx < 0 || idx > n_)
            throw std::domain_error("DickeState: m out of range");
        return idx;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& c : amps_) s += std::norm(c);
        return s;
    }

    /// sum_m |c_m - c_{-m}|^2; zero for even-parity states.
    double parity_defect() const {
        double s = 0.0;
        for (int m = -n_ / 2; m <= n_ / 2; ++m)
            s += std::norm(amps_[index_of(m)] - amps_[index_of(-m)]);
        return s;
    }

    static Complex inner(const DickeState& a, const DickeState& b) {
        if (a.dim() != b.dim())
            throw std::domain_error("DickeState: dimension mismatch");
        Complex s = 0.0;
        for (int k = 0; k < a.dim(); ++k)
            s += std::conj(a.amps_[k]) * b.amps_[k];
        return s;
    }

    /// Basis state |m>.
    static DickeState basis_state(int particle_count, int m) {
        std::vector<Complex> c(particle_count + 1, 0.0);
        DickeState st(particle_count, std::move(c));
        st.amps_[st.index_of(m)] = 1.0;
        return st;
    }

private:
    int n_ = 0;
    std::vector<Complex> amps_;
};

/// Coherent spin state along +x: every particle in the equal superposition
/// of the two modes. Amplitudes c_m = 2^{-N/2} sqrt(binom(N, N/2+m)),
/// evaluated through log-gamma for stability at large N.
inline DickeState css_state(int particle_count) {
    if (particle_count < 2 || particle_count % 2 != 0)
        throw std::domain_error("css_state: particle count must be even and >= 2");
    const int n = particle_count;
    std::vector<Complex> c(n + 1);
    const double log2v = std::log(2.0);
    for (int k = 0; k <= n; ++k) {
        double logbin = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        c[k] = std::exp(0.5 * (logbin - n * log2v));
    }
    return DickeState(n, std::move(c));
}

/// Collective-spin moments of a normalized state, computed from the ladder
/// actions J_+|m> = beta_m |m+1>.
struct SpinExpectations {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
    double jz_sq = 0.0;
    double jy_sq = 0.0;
    double jyjz_sym = 0.0;  // (1/2) <J_y J_z + J_z J_y>

    double jz_var() const { return jz_sq - jz * jz; }
    double jy_var() const { return jy_sq - jy * jy; }
    double jyjz_cov() const { return jyjz_sym - jy * jz; }
};

inline SpinExpectations expectations(const DickeState& state, int particle_count) {
    if (state.particle_count() != particle_count)
        throw std::domain_error("expectations: particle count mismatch");
    const int n = particle_count;
    const int jmax = n / 2;
    SpinExpectations e;
    double jpp_re = 0.0;  // Re <J_+^2>
    for (int m = -jmax; m <= jmax; ++m) {
        const Complex cm = state.amplitude(m);
        const double pm = std::norm(cm);
        e.jz += m * pm;
        e.jz_sq += static_cast<double>(m) * m * pm;
        if (m < jmax) {
            const double bm = beta(m, n);
            const Complex cross = std::conj(state.amplitude(m + 1)) * cm;
            e.jx += bm * cross.real();
            e.jy += bm * cross.imag();
            e.jyjz_sym += (2.0 * m + 1.0) * 0.5 * bm * cross.imag();
        }
        // <J_y^2> = (1/4)[sum (beta_{m-1}^2 + beta_m^2)|c_m|^2 - 2 Re <J_+^2>]
        double b2 = 0.0;
        if (m < jmax) b2 += beta(m, n) * beta(m, n);
        if (m > -jmax) b2 += beta(m - 1, n) * beta(m - 1, n);
        e.jy_sq += 0.25 * b2 * pm;
        if (m + 2 <= jmax) {
            const Complex cross2 = std::conj(state.amplitude(m + 2)) * cm;
            jpp_re += beta(m, n) * beta(m + 1, n) * cross2.real();
        }
    }
    e.jy_sq -= 0.5 * jpp_re;
    return e;
}

}  // namespace bjj
