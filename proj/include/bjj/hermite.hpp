#pragma once

#include <stdexcept>

namespace bjj {

/// Physicists' Hermite polynomial H_n(x), by the forward recurrence
/// H_{n+1}(x) = 2 x H_n(x) - 2 n H_{n-1}(x).
inline double hermite(int n, double x) {
    if (n < 0) throw std::domain_error("hermite: order must be nonnegative");
    if (n == 0) return 1.0;
    double hm = 1.0;       // H_0
    double h = 2.0 * x;    // H_1
    for (int k = 1; k < n; ++k) {
        double hp = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

}  // namespace bjj
