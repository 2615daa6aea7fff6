#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bjj/system_params.hpp"

namespace bjj {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n) : nodes(n), weights(n) {
        if (n < 1) throw std::domain_error("GaussLegendreRule: need n >= 1");
        const double eps = 1e-15;
        int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= eps) break;
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[n - 1 - i] = weights[i];
        }
    }
};

/// Composite Gauss-Legendre grid over [a, b]: `panels` equal panels with a
/// fixed-order rule in each. Total node count = panels * rule order.
struct CompositeGrid {
    std::vector<double> nodes;
    std::vector<double> weights;

    CompositeGrid(double a, double b, int panels, const GaussLegendreRule& rule) {
        if (panels < 1) throw std::domain_error("CompositeGrid: need panels >= 1");
        const int order = static_cast<int>(rule.nodes.size());
        nodes.reserve(static_cast<size_t>(panels) * order);
        weights.reserve(static_cast<size_t>(panels) * order);
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * width;
            double mid = lo + 0.5 * width;
            for (int k = 0; k < order; ++k) {
                nodes.push_back(mid + 0.5 * width * rule.nodes[k]);
                weights.push_back(0.5 * width * rule.weights[k]);
            }
        }
    }
};

/// Composite Simpson weights for an odd number of uniformly spaced nodes.
inline std::vector<double> simpson_weights(int n_nodes, double a, double b) {
    if (n_nodes < 3 || n_nodes % 2 == 0)
        throw std::domain_error("simpson_weights: need an odd node count >= 3");
    const double dx = (b - a) / (n_nodes - 1);
    std::vector<double> w(n_nodes, 0.0);
    for (int i = 0; i + 2 < n_nodes; i += 2) {
        w[i] += dx / 3.0;
        w[i + 1] += 4.0 * dx / 3.0;
        w[i + 2] += dx / 3.0;
    }
    return w;
}

namespace detail {
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of a smooth real integrand.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace bjj
