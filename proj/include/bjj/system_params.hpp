#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bjj {

/// Error raised when an algorithm fails to converge; carries iteration
/// diagnostics in the message.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.14159265358979323846;

/// Physical parameters of a driven two-mode junction.
///
/// All couplings are angular frequencies (rad/s); Planck's constant is
/// divided out of the Hamiltonian everywhere. The linear coupling is
/// ramped from omega0 at t=0 to omega_f at t=t_f while the nonlinear
/// coupling chi stays constant.
struct SystemParams {
    int particle_count = 0;  // N; positive and even
    double chi = 0.0;        // nonlinear coupling (rad/s)
    double omega0 = 0.0;     // initial linear coupling (rad/s)
    double omega_f = 0.0;    // final linear coupling (rad/s)
    double t_f = 0.0;        // protocol duration (s)

    void validate() const {
        if (particle_count < 2 || particle_count % 2 != 0)
            throw std::domain_error("particle_count must be even and >= 2, got " +
                                    std::to_string(particle_count));
        if (!(chi > 0.0)) throw std::domain_error("chi must be positive");
        if (!(omega0 > 0.0)) throw std::domain_error("omega0 must be positive");
        if (!(omega_f > 0.0)) throw std::domain_error("omega_f must be positive");
        if (!(t_f > 0.0)) throw std::domain_error("t_f must be positive");
    }

    int dim() const { return particle_count + 1; }
    double spin() const { return 0.5 * particle_count; }

    /// Lambda_0 = N chi / Omega_0, the ratio of nonlinear to linear coupling
    /// at the start of the protocol.
    double lambda0() const { return particle_count * chi / omega0; }
    double omega_ratio() const { return omega_f / omega0; }
    /// Protocol duration in units of 1/chi.
    double tau_f() const { return chi * t_f; }
    /// Effective Planck constant of the continuum description, h = 2/N.
    double h_eff() const { return 2.0 / particle_count; }

    /// Nonlinear coupling of the reference experiment, 2*pi*0.063 Hz.
    static double default_chi() { return 2.0 * pi * 0.063; }

    /// Build from the dimensionless tuple (N, Lambda_0, Omega_f/Omega_0,
    /// chi*t_f); chi fixes the overall time scale.
    static SystemParams from_dimensionless(int n, double lambda0, double omega_ratio,
                                           double tf_chi, double chi = default_chi()) {
        SystemParams p;
        p.particle_count = n;
        p.chi = chi;
        p.omega0 = n * chi / lambda0;
        p.omega_f = omega_ratio * p.omega0;
        p.t_f = tf_chi / chi;
        p.validate();
        return p;
    }
};

}  // namespace bjj
