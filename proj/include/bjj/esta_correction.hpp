#pragma once

#include <array>
#include <complex>
#include <vector>

#include "bjj/polynomial.hpp"

namespace bjj {

/// Correction pair lambda and the diagnostics that produced it. The
/// correction polynomial is pinned to zero at both ends of the protocol
/// and to lambda_1, lambda_2 at one and two thirds of the duration.
struct EstaCorrection {
    std::array<double, 2> lambda{0.0, 0.0};                // rad/s
    std::vector<std::complex<double>> g;                   // G_n, n = 1..N_modes
    std::vector<std::array<std::complex<double>, 2>> k;    // K_n
    std::array<double, 2> v{0.0, 0.0};                     // sum_n Re(G_n^* K_n)
    std::array<std::array<double, 2>, 2> hessian{{{0.0, 0.0}, {0.0, 0.0}}};
    Polynomial correction_poly_s;  // P_lambda in s = tau/tau_f, units rad/s
    double tau_f = 0.0;
    bool degenerate = false;       // quadratic model was singular; lambda = 0
    int time_nodes_used = 0;

    /// P_lambda at dimensionless time tau.
    double correction(double tau) const { return correction_poly_s(tau / tau_f); }
};

}  // namespace bjj
