#pragma once

#include <cmath>
#include <functional>

#include "bjj/control.hpp"
#include "bjj/ground_state.hpp"
#include "bjj/metrics.hpp"
#include "bjj/propagator.hpp"

namespace bjj {

struct FdOptions {
    double initial_step = 1e-3;
    double rel_tol = 0.01;     // consecutive estimates agree to 1 percent
    double abs_tol = 1e-4;     // or to this absolute difference
    int max_halvings = 12;
};

struct FdResult {
    double value = 0.0;     // |dF/ddelta| at delta = 0
    double step = 0.0;      // final step used
    bool converged = false;
    double one_sided_mismatch = 0.0;  // |right - left| / max(|central|, eps)
};

/// Central-difference derivative magnitude of a fidelity-like function at
/// zero, with the step halved until two estimates agree.
inline FdResult central_derivative(const std::function<double(double)>& f_of_delta,
                                   const FdOptions& opts = {}) {
    FdResult r;
    double step = opts.initial_step;
    const double f0 = f_of_delta(0.0);
    double fp = f_of_delta(step);
    double fm = f_of_delta(-step);
    double est = std::abs(fp - fm) / (2.0 * step);
    for (int i = 0; i < opts.max_halvings; ++i) {
        const double half = 0.5 * step;
        const double fph = f_of_delta(half);
        const double fmh = f_of_delta(-half);
        const double est_h = std::abs(fph - fmh) / (2.0 * half);
        const double diff = std::abs(est_h - est);
        const bool ok = diff <= opts.abs_tol || diff <= opts.rel_tol * std::abs(est_h);
        step = half;
        fp = fph;
        fm = fmh;
        est = est_h;
        if (ok) {
            r.converged = true;
            break;
        }
    }
    r.value = est;
    r.step = step;
    const double right = std::abs(fp - f0) / step;
    const double left = std::abs(f0 - fm) / step;
    r.one_sided_mismatch = std::abs(right - left) / std::max(est, 1e-300);
    return r;
}

namespace detail {

/// Fidelity of the perturbed protocol against the unperturbed target. The
/// unperturbed run picks the converged step grid; perturbed evaluations
/// reuse that grid so discretization error cancels inside finite
/// differences.
struct FidelityProbe {
    const ControlSchedule& schedule;
    const SystemParams& params;
    DickeState initial;
    DickeState target;
    PropagateOptions popts;
    double f0 = 0.0;

    FidelityProbe(const ControlSchedule& s, const SystemParams& p)
        : schedule(s), params(p), initial(ground_state(p, p.omega0)),
          target(ground_state(p, p.omega_f)) {
        const PropagationRun base = propagate_run(initial, schedule, params, {params.t_f});
        f0 = fidelity(target, base.states.back());
        popts.fixed_steps_log2 = base.steps_log2;
    }

    double operator()(const SystematicError& err) const {
        if (err.amplitude == 0.0 && err.timeshift == 0.0) return f0;
        const auto run = propagate_run(initial, schedule, params, {params.t_f}, popts, err);
        return fidelity(target, run.states.back());
    }
};

}  // namespace detail

/// Sensitivity to a constant relative error in the control amplitude,
/// |dF/ddelta| with the applied coupling (1+delta) Omega(t).
inline FdResult sensitivity_amplitude(const ControlSchedule& schedule,
                                      const SystemParams& params, const FdOptions& opts = {}) {
    const detail::FidelityProbe probe(schedule, params);
    return central_derivative(
        [&](double delta) { return probe(SystematicError{delta, 0.0}); }, opts);
}

/// Sensitivity to a constant timing error, |dF/ddelta| with the control
/// evaluated at t + t_f delta wherever that instant lies inside [0, t_f].
inline FdResult sensitivity_timeshift(const ControlSchedule& schedule,
                                      const SystemParams& params, const FdOptions& opts = {}) {
    const detail::FidelityProbe probe(schedule, params);
    return central_derivative(
        [&](double delta) { return probe(SystematicError{0.0, delta}); }, opts);
}

/// Aggregate imperfection sqrt((1-F)^2 + S_m^2 + S_t^2).
inline double imperfection(double f, double s_m, double s_t) {
    if (f < 0.0 || f > 1.0 + 1e-12)
        throw std::domain_error("imperfection: fidelity must lie in [0, 1]");
    return std::sqrt((1.0 - f) * (1.0 - f) + s_m * s_m + s_t * s_t);
}

struct SensitivityReport {
    double fidelity = 0.0;
    double s_m = 0.0;
    double s_t = 0.0;
    double eta = 0.0;
    double fd_step = 0.0;   // final amplitude-derivative step
    bool converged = false;
    double timeshift_onesided_mismatch = 0.0;
};

/// Unperturbed fidelity plus both sensitivities and the aggregate score.
inline SensitivityReport sensitivity_report(const ControlSchedule& schedule,
                                            const SystemParams& params,
                                            const FdOptions& opts = {}) {
    const detail::FidelityProbe probe(schedule, params);
    SensitivityReport rep;
    rep.fidelity = probe.f0;
    const FdResult sm = central_derivative(
        [&](double delta) { return probe(SystematicError{delta, 0.0}); }, opts);
    const FdResult st = central_derivative(
        [&](double delta) { return probe(SystematicError{0.0, delta}); }, opts);
    rep.s_m = sm.value;
    rep.s_t = st.value;
    rep.eta = imperfection(std::min(rep.fidelity, 1.0), rep.s_m, rep.s_t);
    rep.fd_step = sm.step;
    rep.converged = sm.converged && st.converged;
    rep.timeshift_onesided_mismatch = st.one_sided_mismatch;
    return rep;
}

}  // namespace bjj
