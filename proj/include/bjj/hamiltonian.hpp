#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bjj/system_params.hpp"

namespace bjj {

/// Ladder coefficient beta_m = sqrt((N/2 + m + 1)(N/2 - m)), the matrix
/// element <m+1|J_+|m>. Vanishes at both ends of the admissible range.
inline double beta(int m, int particle_count) {
    const int jm = particle_count / 2;
    if (m < -jm - 1 || m > jm)
        throw std::domain_error("beta: m out of range for N = " +
                                std::to_string(particle_count));
    return std::sqrt(static_cast<double>(jm + m + 1) * static_cast<double>(jm - m));
}

/// Real symmetric tridiagonal matrix of H/hbar = chi J_z^2 - Omega J_x in
/// the Dicke basis. diagonal[k] = chi m^2 and offdiagonal[k] couples
/// m <-> m+1 with -Omega beta_m / 2, where k = m + N/2.
struct TridiagonalHamiltonian {
    std::vector<double> diagonal;
    std::vector<double> offdiagonal;

    int dim() const { return static_cast<int>(diagonal.size()); }
};

inline TridiagonalHamiltonian build_hamiltonian(const SystemParams& params, double omega) {
    params.validate();
    if (!std::isfinite(omega))
        throw std::domain_error("build_hamiltonian: omega must be finite");
    const int n = params.particle_count;
    const int jm = n / 2;
    TridiagonalHamiltonian h;
    h.diagonal.resize(n + 1);
    h.offdiagonal.resize(n);
    for (int m = -jm; m <= jm; ++m)
        h.diagonal[m + jm] = params.chi * static_cast<double>(m) * m;
    for (int m = -jm; m < jm; ++m)
        h.offdiagonal[m + jm] = -0.5 * omega * beta(m, n);
    return h;
}

}  // namespace bjj
