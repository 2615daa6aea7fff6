#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "bjj/control.hpp"
#include "bjj/hermite.hpp"
#include "bjj/quadrature.hpp"
#include "bjj/system_params.hpp"

namespace bjj {

/// Invariant eigenfunction chi_n(tau, z) of the harmonic continuum
/// Hamiltonian, frozen at one instant tau. The mode is a Gaussian times a
/// Hermite polynomial whose width and chirp follow the auxiliary function:
///
///   chi_n = sqrt(b) k0^(1/2) i^n / (pi^(1/4) sqrt(2^n n!) sqrt(1-i beta))
///           * ((1+i beta)/(1-i beta))^(n/2)
///           * exp(i phi - z^2 b^2 k0^2 / (2 (1-i beta)))
///           * H_n(z b k0 / sqrt(1+beta^2))
///
/// with C = sqrt(Omega_0 N / (4 chi)), k0 = N/(2 sqrt(C)),
/// beta = b b' / (2C) and phi = -(1+2n) * integral of C/b^2.
struct ContinuumMode {
    int n = 0;
    double b = 1.0;
    double b_prime = 0.0;
    double big_c = 0.0;      // C
    double k0 = 0.0;
    double beta_param = 0.0; // b b' / (2C)
    double phase = 0.0;      // phi(tau)

    std::complex<double> value(double z) const {
        const std::complex<double> one_m_ib(1.0, -beta_param);
        const std::complex<double> one_p_ib(1.0, beta_param);
        const double arg = z * b * k0 / std::sqrt(1.0 + beta_param * beta_param);
        const std::complex<double> gauss =
            std::exp(std::complex<double>(0.0, phase) -
                     z * z * b * b * k0 * k0 / (2.0 * one_m_ib));
        return prefactor(one_m_ib, one_p_ib) * gauss * hermite(n, arg);
    }

    /// d^2 chi_n / dz^2 from the closed form: with gamma the complex
    /// Gaussian exponent coefficient and eta the Hermite scale,
    /// psi'' = [ (4 g^2 z^2 - 2 g) H_n - 8 n g eta z H_{n-1}
    ///           + 4 n (n-1) eta^2 H_{n-2} ] * prefactor * gauss.
    std::complex<double> second_derivative(double z) const {
        const std::complex<double> one_m_ib(1.0, -beta_param);
        const std::complex<double> one_p_ib(1.0, beta_param);
        const double eta = b * k0 / std::sqrt(1.0 + beta_param * beta_param);
        const std::complex<double> gamma = b * b * k0 * k0 / (2.0 * one_m_ib);
        const double arg = eta * z;
        const std::complex<double> gauss =
            std::exp(std::complex<double>(0.0, phase) - gamma * z * z);
        std::complex<double> sum =
            (4.0 * gamma * gamma * z * z - 2.0 * gamma) * hermite(n, arg);
        if (n >= 1) sum += -8.0 * static_cast<double>(n) * gamma * eta * z * hermite(n - 1, arg);
        if (n >= 2)
            sum += 4.0 * static_cast<double>(n) * (n - 1.0) * eta * eta * hermite(n - 2, arg);
        return prefactor(one_m_ib, one_p_ib) * gauss * sum;
    }

private:
    std::complex<double> prefactor(const std::complex<double>& one_m_ib,
                                   const std::complex<double>& one_p_ib) const {
        double fact = 1.0;
        for (int k = 2; k <= n; ++k) fact *= k;
        const double norm = std::sqrt(b) * std::sqrt(k0) /
                            (std::pow(pi, 0.25) * std::sqrt(std::exp2(n) * fact));
        const std::complex<double> i_pow_n = std::pow(std::complex<double>(0.0, 1.0), n);
        const std::complex<double> ratio_pow =
            std::exp(0.5 * static_cast<double>(n) * std::log(one_p_ib / one_m_ib));
        return norm * i_pow_n / std::sqrt(one_m_ib) * ratio_pow;
    }
};

/// Accumulated phase integral I(tau) = integral_0^tau C / b(s)^2 ds.
inline double phase_integral(const ErmakovProfile& profile, double big_c, double tau,
                             double tol = 1e-12) {
    return adaptive_simpson(
        [&](double s) {
            const double bs = profile.b(s);
            return big_c / (bs * bs);
        },
        0.0, tau, tol);
}

inline double continuum_big_c(const SystemParams& params) {
    return std::sqrt(params.omega0 * params.particle_count / (4.0 * params.chi));
}

inline ContinuumMode make_continuum_mode(int n, double tau, const ErmakovProfile& profile,
                                         const SystemParams& params, double phase_int) {
    if (n < 0) throw std::domain_error("make_continuum_mode: n must be >= 0");
    ContinuumMode m;
    m.n = n;
    m.b = profile.b(tau);
    if (!(m.b > 0.0))
        throw std::domain_error("make_continuum_mode: b(tau) must be positive");
    m.b_prime = profile.b_prime(tau);
    m.big_c = continuum_big_c(params);
    m.k0 = params.particle_count / (2.0 * std::sqrt(m.big_c));
    m.beta_param = m.b * m.b_prime / (2.0 * m.big_c);
    m.phase = -(1.0 + 2.0 * n) * phase_int;
    return m;
}

inline ContinuumMode make_continuum_mode(int n, double tau, const ErmakovProfile& profile,
                                         const SystemParams& params) {
    return make_continuum_mode(n, tau, profile, params,
                               phase_integral(profile, continuum_big_c(params), tau));
}

/// chi_n(tau, z) with the phase accumulated by quadrature.
inline std::complex<double> chi_n(int n, double tau, double z, const ErmakovProfile& profile,
                                  const SystemParams& params) {
    return make_continuum_mode(n, tau, profile, params).value(z);
}

/// Momentum-space invariant eigenfunction. Same Ermakov scaling applied to
/// the momentum-space oscillator obtained by the mapping m -> 1/N,
/// m omega^2 -> Omega/chi:
///
///   chi~_n(p) = C^(1/4) / (pi^(1/4) sqrt(2^n n! b))
///               * exp(i (2n+1) I(tau))
///               * exp(-p^2/2 (C/b^2 - i b'/(2b))) * H_n(sqrt(C) p / b)
inline std::complex<double> momentum_eigenfunction(int n, double p, double tau,
                                                   const ErmakovProfile& profile,
                                                   const SystemParams& params) {
    if (n < 0) throw std::domain_error("momentum_eigenfunction: n must be >= 0");
    const double big_c = continuum_big_c(params);
    const double b = profile.b(tau);
    const double bp = profile.b_prime(tau);
    const double phase_int = phase_integral(profile, big_c, tau);
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double norm =
        std::pow(big_c, 0.25) / (std::pow(pi, 0.25) * std::sqrt(std::exp2(n) * fact * b));
    const std::complex<double> lr_phase =
        std::exp(std::complex<double>(0.0, (2.0 * n + 1.0) * phase_int));
    const std::complex<double> exponent =
        -0.5 * p * p * std::complex<double>(big_c / (b * b), -bp / (2.0 * b));
    return norm * lr_phase * std::exp(exponent) * hermite(n, std::sqrt(big_c) * p / b);
}

}  // namespace bjj
