#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bjj/dicke_state.hpp"

namespace bjj {

/// Raised when a figure of merit is undefined for the given state (for
/// instance the Wineland parameter at vanishing mean spin).
struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Number squeezing: Var(J_z) normalized to the coherent-state shot noise
/// N/4. Below one means squeezing along z.
inline double number_squeezing(const DickeState& state, int particle_count) {
    const SpinExpectations e = expectations(state, particle_count);
    return e.jz_var() / (0.25 * particle_count);
}

/// Wineland parameter N Var(J_z) / <J_x>^2; below one certifies
/// entanglement and interferometric gain. Undefined when <J_x> vanishes.
inline double coherent_spin_squeezing(const DickeState& state, int particle_count) {
    const SpinExpectations e = expectations(state, particle_count);
    if (std::abs(e.jx) < 1e-12)
        throw DivergenceError("coherent_spin_squeezing: <J_x> = 0, parameter undefined");
    return particle_count * e.jz_var() / (e.jx * e.jx);
}

inline double to_decibels(double x) {
    if (!(x > 0.0)) throw std::domain_error("to_decibels: argument must be positive");
    return 10.0 * std::log10(x);
}

/// Overlap fidelity |<a|b>|^2; global-phase invariant and symmetric.
inline double fidelity(const DickeState& a, const DickeState& b) {
    return std::norm(DickeState::inner(a, b));
}

/// Smallest normalized variance of a spin quadrature in the y-z plane:
/// (4/N) times the smaller eigenvalue of the 2x2 covariance matrix of
/// (J_y, J_z) with the symmetrized cross term. Equals the minimum over
/// directions of Var(cos(theta) J_z + sin(theta) J_y) * 4/N.
inline double max_plane_squeezing(const DickeState& state, int particle_count) {
    const SpinExpectations e = expectations(state, particle_count);
    const double vy = e.jy_var();
    const double vz = e.jz_var();
    const double cyz = e.jyjz_cov();
    const double mean = 0.5 * (vy + vz);
    const double rad = std::sqrt(0.25 * (vy - vz) * (vy - vz) + cyz * cyz);
    return (mean - rad) / (0.25 * particle_count);
}

/// One row of a squeezing time series.
struct SqueezingRecord {
    double t = 0.0;            // seconds
    double xi_n_sq = 0.0;      // number squeezing
    double xi_s_sq_db = 0.0;   // Wineland parameter in dB; NaN when undefined
    double zeta = 0.0;         // phase coherence <2 J_x / N>
    double fidelity = 0.0;     // overlap with the target state
    double jx_mean = 0.0;
    double jz_var = 0.0;
};

inline SqueezingRecord make_squeezing_record(double t, const DickeState& state,
                                             const DickeState& target, int particle_count) {
    const SpinExpectations e = expectations(state, particle_count);
    SqueezingRecord r;
    r.t = t;
    r.jx_mean = e.jx;
    r.jz_var = e.jz_var();
    r.xi_n_sq = r.jz_var / (0.25 * particle_count);
    r.zeta = 2.0 * e.jx / particle_count;
    if (std::abs(e.jx) < 1e-12) {
        r.xi_s_sq_db = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double xi_s = particle_count * r.jz_var / (e.jx * e.jx);
        r.xi_s_sq_db = xi_s > 0.0 ? to_decibels(xi_s)
                                  : -std::numeric_limits<double>::infinity();
    }
    r.fidelity = fidelity(target, state);
    return r;
}

}  // namespace bjj
