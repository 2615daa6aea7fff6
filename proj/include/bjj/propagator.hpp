#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bjj/control.hpp"
#include "bjj/dicke_state.hpp"
#include "bjj/hamiltonian.hpp"
#include "bjj/system_params.hpp"

namespace bjj {

/// Systematic control errors: the applied coupling is
/// (1 + amplitude) * Omega(t + t_f * timeshift), with the time-shifted
/// value used only where t + t_f * timeshift lies inside [0, t_f].
struct SystematicError {
    double amplitude = 0.0;
    double timeshift = 0.0;
};

inline double evaluate_omega(const ControlSchedule& schedule, double t,
                             const SystematicError& err = {}) {
    double ts = t;
    if (err.timeshift != 0.0) {
        const double shifted = t + schedule.params.t_f * err.timeshift;
        if (shifted >= 0.0 && shifted <= schedule.params.t_f) ts = shifted;
    }
    return (1.0 + err.amplitude) * schedule.omega(ts);
}

struct PropagateOptions {
    int initial_steps_log2 = 12;
    int max_steps_log2 = 20;
    double fidelity_tol = 1e-9;   // refinement stops once 1 - F < tol
    bool force_generic = false;   // disable the exact diagonal fast path
    int fixed_steps_log2 = -1;    // >= 0: integrate once on this grid, no refinement
};

namespace detail {

/// One Crank-Nicolson step: solve (I + i dt/2 H) c' = (I - i dt/2 H) c
/// with H tridiagonal symmetric real; exactly unitary for Hermitian H.
/// Thomas solve on the complex symmetric system; `rhs`, `dl`, `dd` are
/// scratch buffers of size dim.
inline void crank_nicolson_step(std::vector<Complex>& c, const std::vector<double>& diag,
                                const std::vector<double>& off, double half_dt,
                                std::vector<Complex>& rhs, std::vector<Complex>& dd,
                                std::vector<Complex>& dl) {
    const int n = static_cast<int>(c.size());
    const Complex ih(0.0, half_dt);

    for (int i = 0; i < n; ++i) {
        Complex v = (1.0 - ih * diag[i]) * c[i];
        if (i > 0) v -= ih * off[i - 1] * c[i - 1];
        if (i + 1 < n) v -= ih * off[i] * c[i + 1];
        rhs[i] = v;
    }

    // Forward elimination for the tridiagonal system with diagonal
    // 1 + i dt/2 diag[i] and off-diagonals i dt/2 off[i]. The matrix is
    // diagonally dominant for the step sizes chosen by propagate().
    dd[0] = 1.0 + ih * diag[0];
    for (int i = 1; i < n; ++i) {
        const Complex e = ih * off[i - 1];
        dl[i - 1] = e / dd[i - 1];
        dd[i] = 1.0 + ih * diag[i] - dl[i - 1] * e;
        rhs[i] -= dl[i - 1] * rhs[i - 1];
    }
    c[n - 1] = rhs[n - 1] / dd[n - 1];
    for (int i = n - 2; i >= 0; --i)
        c[i] = (rhs[i] - ih * off[i] * c[i + 1]) / dd[i];
}

struct Trajectory {
    std::vector<std::vector<Complex>> samples;
    std::vector<Complex> final_state;
};

inline Trajectory integrate_once(const DickeState& initial, const ControlSchedule& schedule,
                                 const SystemParams& params, const std::vector<double>& times,
                                 long total_steps, const SystematicError& err) {
    const int n = params.particle_count;
    const int dim = n + 1;
    const int jm = n / 2;
    std::vector<double> beta_half(n);
    for (int m = -jm; m < jm; ++m) beta_half[m + jm] = 0.5 * beta(m, n);
    std::vector<double> diag(dim);
    for (int m = -jm; m <= jm; ++m)
        diag[m + jm] = params.chi * static_cast<double>(m) * m;

    std::vector<Complex> c = initial.amplitudes();
    std::vector<Complex> rhs(dim), dd(dim), dl(dim > 1 ? dim - 1 : 0);
    std::vector<double> off(n);

    Trajectory out;
    out.samples.reserve(times.size());

    const double t_end = times.empty() ? params.t_f : times.back();
    const double dt_nominal = t_end / static_cast<double>(total_steps);

    double t = 0.0;
    size_t next_sample = 0;
    while (next_sample < times.size() && times[next_sample] <= 0.0) {
        out.samples.push_back(c);
        ++next_sample;
    }
    // March through the event grid {0, sample times, t_end}; each segment
    // is split uniformly so every sample time lands exactly on a step edge.
    std::vector<double> events;
    events.push_back(0.0);
    for (double ts : times)
        if (ts > 0.0) events.push_back(ts);
    if (events.back() < t_end) events.push_back(t_end);

    for (size_t e = 1; e < events.size(); ++e) {
        const double seg_a = events[e - 1];
        const double seg_b = events[e];
        if (seg_b <= seg_a) {
            // coincident event (repeated sample time)
        } else {
            const long m = std::max<long>(
                1, static_cast<long>(std::ceil((seg_b - seg_a) / dt_nominal - 1e-12)));
            const double dt = (seg_b - seg_a) / static_cast<double>(m);
            for (long k = 0; k < m; ++k) {
                const double tmid = seg_a + (k + 0.5) * dt;
                const double omega = evaluate_omega(schedule, tmid, err);
                for (int i = 0; i < n; ++i) off[i] = -omega * beta_half[i];
                crank_nicolson_step(c, diag, off, 0.5 * dt, rhs, dd, dl);
            }
        }
        t = seg_b;
        while (next_sample < times.size() && times[next_sample] <= t) {
            out.samples.push_back(c);
            ++next_sample;
        }
    }
    out.final_state = c;
    return out;
}

inline double overlap_fidelity(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return std::norm(s);
}

}  // namespace detail

/// Solve i dc/dt = H(t) c with H(t) = chi J_z^2 - Omega(t) J_x from the
/// given initial state, returning the state at each requested sample time.
///
/// The integrator is the unitary Crank-Nicolson (Cayley) scheme on the
/// tridiagonal system with Omega evaluated at step midpoints. The step
/// count starts at 2^initial_steps_log2 over the full interval and doubles
/// until the final state changes by less than fidelity_tol between
/// refinements. A schedule that is identically zero is propagated exactly
/// through the diagonal phases exp(-i chi m^2 t).
struct PropagationRun {
    std::vector<DickeState> states;
    int steps_log2 = 0;  // grid that met the refinement tolerance
};

inline PropagationRun propagate_run(const DickeState& initial, const ControlSchedule& schedule,
                                    const SystemParams& params,
                                    const std::vector<double>& sample_times,
                                    const PropagateOptions& opts = {},
                                    const SystematicError& err = {}) {
    params.validate();
    if (initial.particle_count() != params.particle_count)
        throw std::domain_error("propagate: initial state dimension mismatch");
    if (!std::is_sorted(sample_times.begin(), sample_times.end()))
        throw std::domain_error("propagate: sample times must be sorted");
    if (!sample_times.empty() &&
        (sample_times.front() < 0.0 || sample_times.back() > params.t_f * (1.0 + 1e-12)))
        throw std::domain_error("propagate: sample times must lie in [0, t_f]");
    if (std::abs(initial.norm_sq() - 1.0) > 1e-8)
        throw std::domain_error("propagate: initial state must be normalized");

    PropagationRun run;
    run.states.reserve(sample_times.size());

    if (schedule.is_identically_zero() && !opts.force_generic) {
        const int jm = params.particle_count / 2;
        for (double t : sample_times) {
            std::vector<Complex> c(params.dim());
            for (int m = -jm; m <= jm; ++m) {
                const double phase = -params.chi * static_cast<double>(m) * m * t;
                c[m + jm] = initial.amplitude(m) * std::polar(1.0, phase);
            }
            run.states.emplace_back(params.particle_count, std::move(c));
        }
        return run;
    }

    if (opts.fixed_steps_log2 >= 0) {
        detail::Trajectory traj = detail::integrate_once(initial, schedule, params, sample_times,
                                                         1L << opts.fixed_steps_log2, err);
        for (auto& c : traj.samples)
            run.states.emplace_back(params.particle_count, std::move(c));
        run.steps_log2 = opts.fixed_steps_log2;
        return run;
    }

    // Keep the off-diagonal per-step phase small so the Thomas solve stays
    // diagonally dominant; the refinement loop then controls accuracy.
    double norm_bound = 0.0;
    {
        const double jmax = 0.5 * params.particle_count;
        double omega_max = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double t = params.t_f * static_cast<double>(i) / 256.0;
            omega_max = std::max(omega_max, std::abs(evaluate_omega(schedule, t, err)));
        }
        norm_bound = omega_max * jmax;
    }
    int steps_log2 = opts.initial_steps_log2;
    while (steps_log2 < opts.max_steps_log2 &&
           norm_bound * params.t_f / std::exp2(steps_log2) > 0.5)
        ++steps_log2;

    detail::Trajectory prev =
        detail::integrate_once(initial, schedule, params, sample_times,
                               1L << steps_log2, err);
    bool converged = false;
    while (steps_log2 < opts.max_steps_log2) {
        ++steps_log2;
        detail::Trajectory next =
            detail::integrate_once(initial, schedule, params, sample_times,
                                   1L << steps_log2, err);
        const double f = detail::overlap_fidelity(prev.final_state, next.final_state);
        prev = std::move(next);
        if (1.0 - f < opts.fidelity_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("propagate: step refinement did not converge below 2^" +
                             std::to_string(opts.max_steps_log2) + " steps");

    for (auto& c : prev.samples) {
        DickeState st(params.particle_count, std::move(c));
        if (std::abs(st.norm_sq() - 1.0) > 1e-10)
            throw NumericalError("propagate: norm drifted by " +
                                 std::to_string(std::abs(st.norm_sq() - 1.0)));
        run.states.push_back(std::move(st));
    }
    run.steps_log2 = steps_log2;
    return run;
}

inline std::vector<DickeState> propagate(const DickeState& initial,
                                         const ControlSchedule& schedule,
                                         const SystemParams& params,
                                         const std::vector<double>& sample_times,
                                         const PropagateOptions& opts = {},
                                         const SystematicError& err = {}) {
    return propagate_run(initial, schedule, params, sample_times, opts, err).states;
}

/// State at t = t_f only.
inline DickeState propagate_final(const DickeState& initial, const ControlSchedule& schedule,
                                  const SystemParams& params, const PropagateOptions& opts = {},
                                  const SystematicError& err = {}) {
    return propagate(initial, schedule, params, {params.t_f}, opts, err).back();
}

}  // namespace bjj
