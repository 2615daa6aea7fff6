#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bjj/dicke_state.hpp"
#include "bjj/hamiltonian.hpp"
#include "bjj/system_params.hpp"

namespace bjj {

namespace detail {

/// Number of eigenvalues of the tridiagonal matrix strictly below x
/// (Sturm sequence count with guarded pivots).
inline int sturm_count_below(const TridiagonalHamiltonian& t, double x) {
    const int n = t.dim();
    const double tiny = std::numeric_limits<double>::min();
    int count = 0;
    double q = t.diagonal[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        if (q == 0.0) q = tiny;
        q = t.diagonal[i] - x - t.offdiagonal[i - 1] * t.offdiagonal[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace detail

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

/// Smallest eigenpair of a real symmetric tridiagonal matrix: bisection on
/// the Sturm count brackets the eigenvalue, inverse iteration with an
/// LDL^T solve recovers the eigenvector.
inline EigenPair lowest_eigenpair(const TridiagonalHamiltonian& t) {
    const int n = t.dim();
    if (n == 0) throw std::domain_error("lowest_eigenpair: empty matrix");

    // Gershgorin bounds.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.offdiagonal[i - 1]);
        if (i + 1 < n) r += std::abs(t.offdiagonal[i]);
        lo = std::min(lo, t.diagonal[i] - r);
        hi = std::max(hi, t.diagonal[i] + r);
        scale = std::max(scale, std::abs(t.diagonal[i]) + r);
    }
    scale = std::max(scale, 1e-300);

    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * scale; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::sturm_count_below(t, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    const double lambda = 0.5 * (lo + hi);

    // Inverse iteration on (T - lambda I) y = x with a perturbed-pivot
    // LDL^T factorization; the shift is accurate to machine precision so a
    // couple of iterations suffice.
    const double pivot_floor = 1e-14 * scale;
    std::vector<double> d(n), l(n > 1 ? n - 1 : 0);
    {
        double q = t.diagonal[0] - lambda;
        if (std::abs(q) < pivot_floor) q = (q < 0 ? -pivot_floor : pivot_floor);
        d[0] = q;
        for (int i = 1; i < n; ++i) {
            l[i - 1] = t.offdiagonal[i - 1] / d[i - 1];
            q = t.diagonal[i] - lambda - l[i - 1] * t.offdiagonal[i - 1];
            if (std::abs(q) < pivot_floor) q = (q < 0 ? -pivot_floor : pivot_floor);
            d[i] = q;
        }
    }

    std::vector<double> y(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const int max_iters = 16;
    double resid = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        // Forward substitution L z = y, then D and L^T.
        for (int i = 1; i < n; ++i) y[i] -= l[i - 1] * y[i - 1];
        for (int i = 0; i < n; ++i) y[i] /= d[i];
        for (int i = n - 2; i >= 0; --i) y[i] -= l[i] * y[i + 1];

        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : y) v /= nrm;

        resid = 0.0;
        for (int i = 0; i < n; ++i) {
            double hv = t.diagonal[i] * y[i];
            if (i > 0) hv += t.offdiagonal[i - 1] * y[i - 1];
            if (i + 1 < n) hv += t.offdiagonal[i] * y[i + 1];
            resid = std::max(resid, std::abs(hv - lambda * y[i]));
        }
        if (resid <= 1e-13 * scale) break;
        if (iter == max_iters - 1)
            throw NumericalError("lowest_eigenpair: inverse iteration did not converge after " +
                                 std::to_string(max_iters) + " iterations (residual " +
                                 std::to_string(resid / scale) + " of scale)");
    }

    return EigenPair{lambda, std::move(y)};
}

/// Ground state of H(omega) = chi J_z^2 - omega J_x for omega > 0. The
/// global phase is fixed by making the largest-magnitude amplitude real
/// and positive.
inline DickeState ground_state(const SystemParams& params, double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("ground_state: omega must be positive");
    EigenPair ep = lowest_eigenpair(build_hamiltonian(params, omega));
    int imax = 0;
    for (int i = 1; i < static_cast<int>(ep.vector.size()); ++i)
        if (std::abs(ep.vector[i]) > std::abs(ep.vector[imax])) imax = i;
    const double sign = ep.vector[imax] >= 0.0 ? 1.0 : -1.0;
    std::vector<Complex> amps(ep.vector.size());
    for (size_t i = 0; i < ep.vector.size(); ++i) amps[i] = sign * ep.vector[i];
    return DickeState(params.particle_count, std::move(amps));
}

}  // namespace bjj
