#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bjj/esta_correction.hpp"
#include "bjj/polynomial.hpp"
#include "bjj/system_params.hpp"

namespace bjj {

enum class Scheme { adiabatic, sta1, sta2, esta, oat_zero, sampled };

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::adiabatic: return "adiabatic";
        case Scheme::sta1: return "sta1";
        case Scheme::sta2: return "sta2";
        case Scheme::esta: return "esta";
        case Scheme::oat_zero: return "oat_zero";
        case Scheme::sampled: return "sampled";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "adiabatic") return Scheme::adiabatic;
    if (s == "sta1") return Scheme::sta1;
    if (s == "sta2") return Scheme::sta2;
    if (s == "esta") return Scheme::esta;
    if (s == "oat_zero" || s == "oat") return Scheme::oat_zero;
    if (s == "sampled") return Scheme::sampled;
    throw std::domain_error("unknown scheme: " + s);
}

/// Boundary data of the auxiliary function b at both ends of the protocol,
/// in dimensionless time tau.
struct ErmakovBoundary {
    double b0 = 1.0, b0_prime = 0.0, b0_second = 0.0;
    double bf = 1.0, bf_prime = 0.0, bf_second = 0.0;
};

/// Polynomial auxiliary function b(tau) on [0, tau_f], stored in the
/// rescaled variable s = tau/tau_f for conditioning. Derivatives in tau
/// pick up 1/tau_f per order.
struct ErmakovProfile {
    Polynomial poly_s;
    double tau_f = 0.0;
    ErmakovBoundary bc;
    Scheme scheme = Scheme::sta1;

    double b(double tau) const { return poly_s(tau / tau_f); }
    double b_prime(double tau) const { return poly_s.derivative(tau / tau_f, 1) / tau_f; }
    double b_second(double tau) const {
        return poly_s.derivative(tau / tau_f, 2) / (tau_f * tau_f);
    }

    /// Smallest value of b over a dense sampling of [0, tau_f].
    double min_on_grid(int n_points = 10000) const {
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n_points; ++i)
            mn = std::min(mn, poly_s(static_cast<double>(i) / n_points));
        return mn;
    }
};

/// Time-dependent linear coupling Omega(t). STA schedules are evaluated
/// analytically from the polynomial profile, never pre-sampled.
class ControlSchedule {
public:
    Scheme scheme = Scheme::adiabatic;
    SystemParams params;
    std::optional<ErmakovProfile> profile;
    std::optional<EstaCorrection> correction;

    /// Omega at time t (seconds); values may be negative.
    double omega(double t) const {
        switch (scheme) {
            case Scheme::adiabatic:
                if (t == 0.0) return params.omega0;
                if (t == params.t_f) return params.omega_f;
                return params.omega0 + (params.omega_f - params.omega0) * t / params.t_f;
            case Scheme::sta1:
            case Scheme::sta2:
                return omega_from_profile(params.chi * t);
            case Scheme::esta:
                return omega_from_profile(params.chi * t) +
                       correction->correction(params.chi * t);
            case Scheme::oat_zero:
                return 0.0;
            case Scheme::sampled:
                return sampled_value(t);
        }
        return 0.0;
    }

    bool is_identically_zero() const { return scheme == Scheme::oat_zero; }

    void set_samples(std::vector<double> times, std::vector<double> values) {
        if (times.size() != values.size() || times.size() < 2)
            throw std::domain_error("ControlSchedule: need >= 2 schedule samples");
        if (!std::is_sorted(times.begin(), times.end()))
            throw std::domain_error("ControlSchedule: sample times must be sorted");
        sample_times_ = std::move(times);
        sample_values_ = std::move(values);
    }

private:
    std::vector<double> sample_times_;
    std::vector<double> sample_values_;

    double omega_from_profile(double tau) const {
        const double b = profile->b(tau);
        if (!(b > 0.0))
            throw std::domain_error("ControlSchedule: auxiliary function b <= 0 at tau = " +
                                    std::to_string(tau));
        const double n = params.particle_count;
        const double l0 = params.lambda0();
        return params.omega0 *
               (1.0 / (b * b * b * b) - (l0 / (n * n)) * profile->b_second(tau) / b);
    }

    double sampled_value(double t) const {
        if (sample_times_.empty())
            throw std::domain_error("ControlSchedule: sampled scheme without samples");
        if (t <= sample_times_.front()) return sample_values_.front();
        if (t >= sample_times_.back()) return sample_values_.back();
        auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), t);
        size_t i = static_cast<size_t>(it - sample_times_.begin());
        double t0 = sample_times_[i - 1], t1 = sample_times_[i];
        double w = (t - t0) / (t1 - t0);
        return (1.0 - w) * sample_values_[i - 1] + w * sample_values_[i];
    }
};

/// Linear ramp Omega_0 -> Omega_f.
inline ControlSchedule adiabatic_schedule(const SystemParams& params) {
    params.validate();
    ControlSchedule s;
    s.scheme = Scheme::adiabatic;
    s.params = params;
    return s;
}

/// Constant zero coupling (free one-axis twisting).
inline ControlSchedule oat_schedule(const SystemParams& params) {
    params.validate();
    ControlSchedule s;
    s.scheme = Scheme::oat_zero;
    s.params = params;
    return s;
}

inline ControlSchedule sampled_schedule(const SystemParams& params, std::vector<double> times,
                                        std::vector<double> values) {
    params.validate();
    ControlSchedule s;
    s.scheme = Scheme::sampled;
    s.params = params;
    s.set_samples(std::move(times), std::move(values));
    return s;
}

namespace detail {

inline ErmakovProfile make_profile(const SystemParams& params, const ErmakovBoundary& bc,
                                   Scheme scheme, int degree) {
    const double tf = params.tau_f();
    // Conditions in s = tau/tau_f; k-th derivative values scale by tau_f^k.
    std::vector<BoundaryCondition> conds = {
        {0, 0.0, bc.b0},
        {0, 1.0, bc.bf},
        {1, 0.0, bc.b0_prime * tf},
        {1, 1.0, bc.bf_prime * tf},
        {2, 0.0, bc.b0_second * tf * tf},
        {2, 1.0, bc.bf_second * tf * tf},
    };
    ErmakovProfile p;
    p.poly_s = fit_boundary_polynomial(conds, degree);
    p.tau_f = tf;
    p.bc = bc;
    p.scheme = scheme;
    if (!(p.min_on_grid() > 0.0))
        throw std::domain_error("ermakov profile: b(tau) is not positive on [0, tau_f]");
    return p;
}

}  // namespace detail

/// Auxiliary function with the flat boundary conditions b(0) = 1,
/// b(tau_f) = (Omega_0/Omega_f)^(1/4) and vanishing first and second
/// derivatives at both ends.
inline ErmakovProfile sta1_profile(const SystemParams& params, int degree = 6) {
    params.validate();
    ErmakovBoundary bc;
    bc.b0 = 1.0;
    bc.bf = std::pow(params.omega0 / params.omega_f, 0.25);
    return detail::make_profile(params, bc, Scheme::sta1, degree);
}

/// Auxiliary function whose endpoint values and curvatures match the
/// harmonic ground states with the linear-coupling potential term kept,
/// so that the inverted control still starts at Omega_0 and ends at
/// Omega_f.
inline ErmakovProfile sta2_profile(const SystemParams& params, int degree = 6) {
    params.validate();
    const double n = params.particle_count;
    const double l0 = params.lambda0();
    const double r = params.omega_f / params.omega0;
    ErmakovBoundary bc;
    bc.b0 = std::pow(1.0 + 1.0 / l0, 0.25);
    bc.bf = std::pow((1.0 / r) * (1.0 + r / l0), 0.25);
    bc.b0_second = -(n * n / (l0 * l0)) / std::pow(1.0 + 1.0 / l0, 0.75);
    bc.bf_second = -(n * n / (l0 * l0)) * r / std::pow(1.0 / r + 1.0 / l0, 0.75);
    return detail::make_profile(params, bc, Scheme::sta2, degree);
}

/// Invert the auxiliary-function equation for the physical control:
/// Omega(tau) = Omega_0 [ b^-4 - (Lambda_0/N^2) b''/b ].
inline ControlSchedule omega_from_b(const ErmakovProfile& profile, const SystemParams& params) {
    params.validate();
    if (!(profile.min_on_grid() > 0.0))
        throw std::domain_error("omega_from_b: b(tau) must be positive on [0, tau_f]");
    ControlSchedule s;
    s.scheme = profile.scheme == Scheme::sta2 ? Scheme::sta2 : Scheme::sta1;
    s.params = params;
    s.profile = profile;
    return s;
}

/// Maximum over a collocation grid of the auxiliary-equation residual
/// |b'' - N^2/(Lambda_0 b^3) + b (Omega/Omega_0) N^2/Lambda_0|, normalized
/// by N^2/Lambda_0.
inline double ermakov_residual(const ErmakovProfile& profile, const ControlSchedule& schedule,
                               const SystemParams& params, int n_points = 1000) {
    const double n = params.particle_count;
    const double l0 = params.lambda0();
    const double unit = n * n / l0;
    double worst = 0.0;
    for (int i = 0; i <= n_points; ++i) {
        const double tau = profile.tau_f * static_cast<double>(i) / n_points;
        const double b = profile.b(tau);
        const double bpp = profile.b_second(tau);
        const double omega = schedule.omega(tau / params.chi);
        const double resid = bpp - unit / (b * b * b) + b * (omega / params.omega0) * unit;
        worst = std::max(worst, std::abs(resid) / unit);
    }
    return worst;
}

}  // namespace bjj
