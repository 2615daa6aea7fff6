#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bjj/continuum.hpp"
#include "bjj/control.hpp"
#include "bjj/esta_correction.hpp"
#include "bjj/quadrature.hpp"
#include "bjj/system_params.hpp"

namespace bjj {

/// Hopping amplitude of the discrete system expressed on the continuum
/// grid, b_h(z) = (1/2) sqrt((1+z+h)(1-z)); clamped to zero outside
/// [-1-h, 1] where the product under the root is negative.
inline double hopping_coefficient(double z, double h) {
    if (z <= -1.0 - h || z >= 1.0) return 0.0;
    const double prod = (1.0 + z + h) * (1.0 - z);
    return prod > 0.0 ? 0.5 * std::sqrt(prod) : 0.0;
}

/// The exact-minus-approximate Hamiltonian difference is evaluated as a
/// direct operator subtraction H_S - H_0. The `printed` variant flips the
/// sign of the second-derivative term for comparison.
enum class DeltaHSign { subtraction, printed };

/// (Delta_H psi)(z) for a closed-form mode psi, at fixed dimensionless
/// time tau. Both pieces are proportional to Omega:
///   H_S psi = -(Omega/chi) [ b_h(z-h) psi(z-h) + b_h(z) psi(z+h) ] + (N/2) z^2 psi
///   H_0 psi = -h^2 (Omega/(2 chi)) psi'' + (N/2) z^2 psi
inline std::function<std::complex<double>(double)> apply_delta_h(
    const ContinuumMode& psi, double tau, const ControlSchedule& schedule,
    const SystemParams& params, DeltaHSign sign = DeltaHSign::subtraction) {
    const double h = params.h_eff();
    const double omega_over_chi = schedule.omega(tau / params.chi) / params.chi;
    return [psi, h, omega_over_chi, sign](double z) {
        const std::complex<double> shifts = hopping_coefficient(z - h, h) * psi.value(z - h) +
                                            hopping_coefficient(z, h) * psi.value(z + h);
        const std::complex<double> second = 0.5 * h * h * psi.second_derivative(z);
        if (sign == DeltaHSign::subtraction)
            return omega_over_chi * (second - shifts);
        return -omega_over_chi * (shifts + second);
    };
}

/// Rule fixing the correction polynomial through its four pinning
/// conditions: the minimum-norm degree-4 solution, or the unique cubic.
enum class PLambdaRule { min_norm_degree4, cubic };

/// Basis polynomials f_i(s) = dP_lambda/dlambda_i in s = tau/tau_f:
/// f_1 passes through (0,0), (1/3,1), (2/3,0), (1,0) and f_2 through
/// (0,0), (1/3,0), (2/3,1), (1,0).
inline std::array<Polynomial, 2> plambda_basis(PLambdaRule rule = PLambdaRule::min_norm_degree4) {
    const int degree = rule == PLambdaRule::cubic ? 3 : 4;
    auto fit = [degree](double v13, double v23) {
        std::vector<BoundaryCondition> conds = {
            {0, 0.0, 0.0}, {0, 1.0 / 3.0, v13}, {0, 2.0 / 3.0, v23}, {0, 1.0, 0.0}};
        return fit_boundary_polynomial(conds, degree);
    };
    return {fit(1.0, 0.0), fit(0.0, 1.0)};
}

struct EstaOptions {
    int n_modes = 2;            // number of invariant modes summed over
    int z_nodes = 2048;         // composite Gauss-Legendre nodes over [-1-h, 1+h]
    int time_nodes = 201;       // initial composite-Simpson nodes over [0, tau_f]
    int max_time_doublings = 6;
    double lambda_rel_tol = 1e-4;
    PLambdaRule plambda_rule = PLambdaRule::min_norm_degree4;
    DeltaHSign deltah_sign = DeltaHSign::subtraction;
    int poly_degree = 6;        // degree of the auxiliary-function polynomial
};

namespace detail {

struct GkIntegrals {
    std::vector<std::complex<double>> g;                 // n = 1..n_modes
    std::vector<std::array<std::complex<double>, 2>> k;  // n = 1..n_modes
};

/// One pass of the nested quadrature: composite Simpson in tau around a
/// composite Gauss-Legendre rule in z, with the phase integral of C/b^2
/// accumulated along the ordered tau grid. All integrals are evaluated in
/// dimensionless tau; the scale invariance of the correction makes the
/// choice of time unit immaterial.
inline GkIntegrals gk_integrate(const ControlSchedule& schedule, const ErmakovProfile& profile,
                                const SystemParams& params, const EstaOptions& opts,
                                int time_nodes) {
    const int nm = opts.n_modes;
    const double h = params.h_eff();
    const double tau_f = profile.tau_f;
    const double big_c = continuum_big_c(params);

    const int gl_order = 16;
    const int panels = std::max(1, opts.z_nodes / gl_order);
    static thread_local GaussLegendreRule rule(gl_order);
    CompositeGrid zgrid(-1.0 - h, 1.0 + h, panels, rule);

    const std::vector<double> wt = simpson_weights(time_nodes, 0.0, tau_f);
    const auto basis = plambda_basis(opts.plambda_rule);

    GkIntegrals out;
    out.g.assign(nm, 0.0);
    out.k.assign(nm, {std::complex<double>(0.0), std::complex<double>(0.0)});

    double phase_acc = 0.0;
    double tau_prev = 0.0;
    for (int j = 0; j < time_nodes; ++j) {
        const double tau = tau_f * static_cast<double>(j) / (time_nodes - 1);
        if (j > 0) {
            // advance the phase integral over [tau_prev, tau] with a short
            // composite Simpson rule; the integrand C/b^2 is smooth
            const int sub = 8;
            const auto wsub = simpson_weights(2 * sub + 1, tau_prev, tau);
            double inc = 0.0;
            for (int q = 0; q <= 2 * sub; ++q) {
                const double s = tau_prev + (tau - tau_prev) * q / (2.0 * sub);
                const double bs = profile.b(s);
                inc += wsub[q] * big_c / (bs * bs);
            }
            phase_acc += inc;
        }
        tau_prev = tau;

        const ContinuumMode mode0 = make_continuum_mode(0, tau, profile, params, phase_acc);
        std::vector<ContinuumMode> modes;
        modes.reserve(nm);
        for (int n = 1; n <= nm; ++n)
            modes.push_back(make_continuum_mode(n, tau, profile, params, phase_acc));

        const double omega_over_chi = schedule.omega(tau / params.chi) / params.chi;
        const double s_frac = tau / tau_f;
        const double f1 = basis[0](s_frac);
        const double f2 = basis[1](s_frac);

        std::vector<std::complex<double>> inner_g(nm, 0.0);
        std::vector<std::complex<double>> inner_k(nm, 0.0);
        for (size_t iz = 0; iz < zgrid.nodes.size(); ++iz) {
            const double z = zgrid.nodes[iz];
            const double w = zgrid.weights[iz];
            const std::complex<double> shifts =
                hopping_coefficient(z - h, h) * mode0.value(z - h) +
                hopping_coefficient(z, h) * mode0.value(z + h);
            const std::complex<double> second = 0.5 * h * h * mode0.second_derivative(z);
            std::complex<double> dh;
            if (opts.deltah_sign == DeltaHSign::subtraction)
                dh = omega_over_chi * (second - shifts);
            else
                dh = -omega_over_chi * (shifts + second);
            const std::complex<double> dh_domega = -shifts / params.chi;
            for (int n = 0; n < nm; ++n) {
                const std::complex<double> bra = std::conj(modes[n].value(z));
                inner_g[n] += w * bra * dh;
                inner_k[n] += w * bra * dh_domega;
            }
        }
        for (int n = 0; n < nm; ++n) {
            out.g[n] += wt[j] * inner_g[n];
            out.k[n][0] += wt[j] * f1 * inner_k[n];
            out.k[n][1] += wt[j] * f2 * inner_k[n];
        }
    }
    return out;
}

}  // namespace detail

/// Scalar auxiliary integral G_n = integral over tau of <chi_n|DeltaH|chi_0>
/// along the improved-STA trajectory, refined until stable.
inline std::complex<double> compute_g(int n, const ControlSchedule& schedule_sta2,
                                      const ErmakovProfile& profile, const SystemParams& params,
                                      EstaOptions opts = {}) {
    if (n < 1) throw std::domain_error("compute_g: n must be >= 1");
    opts.n_modes = n;
    int nodes = opts.time_nodes;
    std::complex<double> prev =
        detail::gk_integrate(schedule_sta2, profile, params, opts, nodes).g[n - 1];
    for (int d = 0; d < opts.max_time_doublings; ++d) {
        nodes = 2 * (nodes - 1) + 1;
        std::complex<double> next =
            detail::gk_integrate(schedule_sta2, profile, params, opts, nodes).g[n - 1];
        const double delta = std::abs(next - prev);
        prev = next;
        if (delta <= 1e-6 * std::abs(next) + 1e-13 * (1.0 + std::abs(next))) return next;
    }
    throw NumericalError("compute_g: time quadrature did not converge for n = " +
                         std::to_string(n));
}

/// Vector auxiliary integral K_n with components weighted by the
/// correction-basis polynomials f_i(tau); the operator is the
/// Omega-derivative of the exact Hamiltonian, -(1/chi) times the hopping
/// shifts.
inline std::array<std::complex<double>, 2> compute_k(int n, const ControlSchedule& schedule_sta2,
                                                     const ErmakovProfile& profile,
                                                     const SystemParams& params,
                                                     EstaOptions opts = {}) {
    if (n < 1) throw std::domain_error("compute_k: n must be >= 1");
    opts.n_modes = n;
    int nodes = opts.time_nodes;
    auto prev = detail::gk_integrate(schedule_sta2, profile, params, opts, nodes).k[n - 1];
    for (int d = 0; d < opts.max_time_doublings; ++d) {
        nodes = 2 * (nodes - 1) + 1;
        auto next = detail::gk_integrate(schedule_sta2, profile, params, opts, nodes).k[n - 1];
        const double delta = std::abs(next[0] - prev[0]) + std::abs(next[1] - prev[1]);
        const double scale = std::abs(next[0]) + std::abs(next[1]);
        prev = next;
        if (delta <= 1e-6 * scale + 1e-13 * (1.0 + scale)) return next;
    }
    throw NumericalError("compute_k: time quadrature did not converge for n = " +
                         std::to_string(n));
}

struct LambdaSolution {
    std::array<double, 2> lambda{0.0, 0.0};
    std::array<double, 2> v{0.0, 0.0};
    std::array<std::array<double, 2>, 2> hessian{{{0.0, 0.0}, {0.0, 0.0}}};
    bool degenerate = false;
};

/// Correction pair from the quadratic fidelity model:
/// v = sum_n Re(G_n^* K_n), H_{l,k} = sum_n Re((K_n^*)_k (K_n)_l),
/// lambda = -(|v|^2 / (v^T H v)) v. A singular quadratic form yields
/// lambda = 0 with the degeneracy flag set.
inline LambdaSolution solve_lambda(const std::vector<std::complex<double>>& g,
                                   const std::vector<std::array<std::complex<double>, 2>>& k) {
    if (g.empty() || g.size() != k.size())
        throw std::domain_error("solve_lambda: need matching nonempty G and K lists");
    LambdaSolution sol;
    for (size_t n = 0; n < g.size(); ++n) {
        sol.v[0] += (std::conj(g[n]) * k[n][0]).real();
        sol.v[1] += (std::conj(g[n]) * k[n][1]).real();
        for (int l = 0; l < 2; ++l)
            for (int kk = 0; kk < 2; ++kk)
                sol.hessian[l][kk] += (std::conj(k[n][kk]) * k[n][l]).real();
    }
    const double v_sq = sol.v[0] * sol.v[0] + sol.v[1] * sol.v[1];
    double vhv = 0.0;
    for (int l = 0; l < 2; ++l)
        for (int kk = 0; kk < 2; ++kk) vhv += sol.v[l] * sol.hessian[l][kk] * sol.v[kk];
    if (std::abs(vhv) < 1e-30) {
        sol.degenerate = true;
        return sol;
    }
    const double scale = -v_sq / vhv;
    sol.lambda = {scale * sol.v[0], scale * sol.v[1]};
    return sol;
}

/// Full correction for the improved-STA baseline: G_n/K_n integrals with
/// the time quadrature doubled until lambda is stable, then the correction
/// polynomial through (0,0), (tau_f/3, l1), (2 tau_f/3, l2), (tau_f, 0).
inline EstaCorrection esta_correction(const SystemParams& params, const EstaOptions& opts = {}) {
    params.validate();
    const ErmakovProfile profile = sta2_profile(params, opts.poly_degree);
    const ControlSchedule base = omega_from_b(profile, params);

    int nodes = opts.time_nodes;
    detail::GkIntegrals gk = detail::gk_integrate(base, profile, params, opts, nodes);
    LambdaSolution sol = solve_lambda(gk.g, gk.k);
    bool converged = false;
    for (int d = 0; d < opts.max_time_doublings; ++d) {
        const int next_nodes = 2 * (nodes - 1) + 1;
        detail::GkIntegrals gk2 = detail::gk_integrate(base, profile, params, opts, next_nodes);
        LambdaSolution sol2 = solve_lambda(gk2.g, gk2.k);
        const double delta = std::hypot(sol2.lambda[0] - sol.lambda[0],
                                        sol2.lambda[1] - sol.lambda[1]);
        const double scale = std::hypot(sol2.lambda[0], sol2.lambda[1]);
        nodes = next_nodes;
        gk = std::move(gk2);
        sol = sol2;
        if (delta <= opts.lambda_rel_tol * scale + 1e-300) {
            converged = true;
            break;
        }
        if (scale == 0.0) {  // zero correction is trivially stable
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("esta_correction: lambda not stable after " +
                             std::to_string(opts.max_time_doublings) + " time-grid doublings");

    EstaCorrection corr;
    corr.lambda = sol.lambda;
    corr.g = gk.g;
    corr.k = gk.k;
    corr.v = sol.v;
    corr.hessian = sol.hessian;
    corr.degenerate = sol.degenerate;
    corr.tau_f = profile.tau_f;
    corr.time_nodes_used = nodes;
    const auto basis = plambda_basis(opts.plambda_rule);
    corr.correction_poly_s =
        basis[0].scaled(sol.lambda[0]).plus(basis[1].scaled(sol.lambda[1]));
    return corr;
}

/// Corrected schedule Omega_e(tau) = Omega_2(tau) + P_lambda(tau).
inline ControlSchedule esta_schedule(const SystemParams& params, const EstaOptions& opts = {}) {
    ControlSchedule s = omega_from_b(sta2_profile(params, opts.poly_degree), params);
    s.scheme = Scheme::esta;
    s.correction = esta_correction(params, opts);
    return s;
}

}  // namespace bjj
