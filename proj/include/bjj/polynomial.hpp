#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bjj {

/// Real polynomial in the monomial basis, p(s) = sum_k c_k s^k.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    const std::vector<double>& coefficients() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double s) const {
        double v = 0.0;
        for (size_t k = coeffs_.size(); k-- > 0;) v = v * s + coeffs_[k];
        return v;
    }

    /// Value of the d-th derivative at s.
    double derivative(double s, int d) const {
        if (d < 0) throw std::domain_error("Polynomial: derivative order < 0");
        if (d == 0) return (*this)(s);
        double v = 0.0;
        for (size_t k = coeffs_.size(); k-- > 0;) {
            if (static_cast<int>(k) < d) break;
            double fac = 1.0;
            for (int j = 0; j < d; ++j) fac *= static_cast<double>(k - j);
            v += fac * coeffs_[k] * std::pow(s, static_cast<double>(k - d));
        }
        return v;
    }

    Polynomial scaled(double factor) const {
        std::vector<double> c = coeffs_;
        for (double& x : c) x *= factor;
        return Polynomial(std::move(c));
    }

    Polynomial plus(const Polynomial& other) const {
        std::vector<double> c(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
        for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
        for (size_t k = 0; k < other.coeffs_.size(); ++k) c[k] += other.coeffs_[k];
        return Polynomial(std::move(c));
    }

private:
    std::vector<double> coeffs_{0.0};
};

/// One interpolation/osculation condition: the `order`-th derivative at
/// `location` must equal `value`. Locations are in the rescaled variable
/// s in [0, 1].
struct BoundaryCondition {
    int order = 0;       // 0, 1 or 2
    double location = 0; // 0 or 1
    double value = 0;
};

/// Fit a degree-`degree` polynomial meeting every condition. When the
/// system is underdetermined the minimum-Euclidean-norm coefficient vector
/// is returned; an inconsistent or rank-deficient determined system raises
/// a domain error.
inline Polynomial fit_boundary_polynomial(const std::vector<BoundaryCondition>& conditions,
                                          int degree) {
    const int n_cond = static_cast<int>(conditions.size());
    const int n_coef = degree + 1;
    if (n_cond == 0) throw std::domain_error("fit_boundary_polynomial: no conditions");
    if (n_coef < n_cond)
        throw std::domain_error("fit_boundary_polynomial: degree too small for conditions");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_cond, n_coef);
    Eigen::VectorXd rhs(n_cond);
    for (int i = 0; i < n_cond; ++i) {
        const auto& c = conditions[i];
        if (c.order < 0 || c.order > 2)
            throw std::domain_error("fit_boundary_polynomial: condition order must be 0..2");
        for (int k = c.order; k < n_coef; ++k) {
            double fac = 1.0;
            for (int j = 0; j < c.order; ++j) fac *= static_cast<double>(k - j);
            a(i, k) = fac * std::pow(c.location, static_cast<double>(k - c.order));
        }
        rhs(i) = c.value;
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    if (cod.rank() < n_cond)
        throw std::domain_error("fit_boundary_polynomial: rank-deficient condition set");
    Eigen::VectorXd sol = cod.solve(rhs);

    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if ((a * sol - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::domain_error("fit_boundary_polynomial: inconsistent condition set");

    return Polynomial(std::vector<double>(sol.data(), sol.data() + sol.size()));
}

}  // namespace bjj
