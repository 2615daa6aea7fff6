#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "bjj/bjj.hpp"
#include "oracles.hpp"

using namespace bjj;

TEST_SUITE_BEGIN("control_synthesis");

TEST_CASE("boundary polynomial fitting") {
    SUBCASE("all-flat conditions give the constant polynomial") {
        std::vector<BoundaryCondition> conds = {{0, 0.0, 1.0}, {0, 1.0, 1.0}, {1, 0.0, 0.0},
                                                {1, 1.0, 0.0}, {2, 0.0, 0.0}, {2, 1.0, 0.0}};
        auto p = fit_boundary_polynomial(conds, 6);
        for (double s : {0.0, 0.3, 0.7, 1.0}) CHECK(p(s) == doctest::Approx(1.0).epsilon(1e-12));
        for (size_t k = 1; k < p.coefficients().size(); ++k)
            CHECK(std::abs(p.coefficients()[k]) < 1e-10);
    }
    SUBCASE("degree 5 interpolant matches a dense linear solve") {
        std::vector<BoundaryCondition> conds = {{0, 0.0, 1.0},  {0, 1.0, 1.8}, {1, 0.0, 0.2},
                                                {1, 1.0, -0.3}, {2, 0.0, 0.5}, {2, 1.0, 1.1}};
        auto p = fit_boundary_polynomial(conds, 5);
        Eigen::MatrixXd a(6, 6);
        Eigen::VectorXd rhs(6);
        for (int i = 0; i < 6; ++i) {
            const auto& c = conds[i];
            for (int k = 0; k < 6; ++k) {
                double fac = 1.0;
                for (int j = 0; j < c.order; ++j) fac *= k - j;
                a(i, k) = (k < c.order) ? 0.0 : fac * std::pow(c.location, k - c.order);
            }
            rhs(i) = c.value;
        }
        Eigen::VectorXd ref = a.partialPivLu().solve(rhs);
        for (int k = 0; k < 6; ++k)
            CHECK(p.coefficients()[k] == doctest::Approx(ref(k)).epsilon(1e-12));
    }
    SUBCASE("every condition is reproduced") {
        std::vector<BoundaryCondition> conds = {{0, 0.0, 2.0}, {0, 1.0, -1.0}, {1, 1.0, 4.0},
                                                {2, 0.0, -3.0}};
        auto p = fit_boundary_polynomial(conds, 6);
        CHECK(p(0.0) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(p(1.0) == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(p.derivative(1.0, 1) == doctest::Approx(4.0).epsilon(1e-10));
        CHECK(p.derivative(0.0, 2) == doctest::Approx(-3.0).epsilon(1e-10));
    }
    SUBCASE("error paths") {
        CHECK_THROWS_AS(fit_boundary_polynomial({{0, 0.0, 1.0}, {0, 0.0, 2.0}}, 4),
                        std::domain_error);  // contradictory
        CHECK_THROWS_AS(fit_boundary_polynomial({{0, 0.0, 1.0}, {0, 1.0, 2.0}}, 0),
                        std::domain_error);  // degree too small
        CHECK_THROWS_AS(fit_boundary_polynomial({}, 3), std::domain_error);
    }
}

TEST_CASE("sta1 profile") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    auto prof = sta1_profile(p);
    SUBCASE("boundary values") {
        CHECK(prof.b(0.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(prof.b(prof.tau_f) ==
              doctest::Approx(std::pow(10.0, 0.25)).epsilon(1e-10));  // (omega0/omega_f)^(1/4)
        CHECK(std::abs(prof.b_prime(0.0)) < 1e-8);
        CHECK(std::abs(prof.b_prime(prof.tau_f)) < 1e-8);
        CHECK(std::abs(prof.b_second(0.0)) < 1e-6);
        CHECK(std::abs(prof.b_second(prof.tau_f)) < 1e-6);
        CHECK(prof.min_on_grid() > 0.0);
    }
    SUBCASE("boundary record reproduces stored values") {
        CHECK(prof.b(0.0) == doctest::Approx(prof.bc.b0).epsilon(1e-10));
        CHECK(prof.b(prof.tau_f) == doctest::Approx(prof.bc.bf).epsilon(1e-10));
    }
    SUBCASE("identity protocol collapses to the constant solution") {
        auto pid = SystemParams::from_dimensionless(50, 10.0, 1.0, 0.16, 1.0);
        auto prof_id = sta1_profile(pid);
        auto sched = omega_from_b(prof_id, pid);
        for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            CHECK(prof_id.b(f * prof_id.tau_f) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(sched.omega(f * pid.t_f) == doctest::Approx(pid.omega0).epsilon(1e-10));
        }
    }
}

TEST_CASE("sta2 profile boundary conditions") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    auto prof = sta2_profile(p);
    CHECK(prof.b(0.0) == doctest::Approx(std::pow(1.1, 0.25)).epsilon(1e-12));
    CHECK(prof.b(prof.tau_f) == doctest::Approx(std::pow(10.1, 0.25)).epsilon(1e-12));
    CHECK(prof.b(0.0) == doctest::Approx(1.024114).epsilon(1e-6));
    CHECK(prof.b(prof.tau_f) == doctest::Approx(1.78277).epsilon(1e-4));
    const double n2l2 = 2500.0 / 100.0;
    CHECK(prof.b_second(0.0) ==
          doctest::Approx(-n2l2 / std::pow(1.1, 0.75)).epsilon(1e-8));
    CHECK(prof.b_second(prof.tau_f) ==
          doctest::Approx(-n2l2 * 0.1 / std::pow(10.1, 0.75)).epsilon(1e-8));
}

TEST_CASE("control schedules from the auxiliary function") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    SUBCASE("constant b gives constant omega") {
        ErmakovProfile prof;
        prof.poly_s = Polynomial({1.0});
        prof.tau_f = p.tau_f();
        prof.scheme = Scheme::sta1;
        auto sched = omega_from_b(prof, p);
        for (double f : {0.0, 0.37, 1.0})
            CHECK(sched.omega(f * p.t_f) == doctest::Approx(p.omega0).epsilon(1e-13));
    }
    SUBCASE("sta1 endpoints") {
        auto sched = omega_from_b(sta1_profile(p), p);
        CHECK(sched.omega(0.0) == doctest::Approx(p.omega0).epsilon(1e-10));
        CHECK(sched.omega(p.t_f) == doctest::Approx(p.omega_f).epsilon(1e-10));
    }
    SUBCASE("sta2 endpoints hold through the curvature conditions") {
        auto sched = omega_from_b(sta2_profile(p), p);
        CHECK(sched.omega(0.0) == doctest::Approx(p.omega0).epsilon(1e-10));
        CHECK(sched.omega(p.t_f) == doctest::Approx(p.omega_f).epsilon(1e-10));
    }
    SUBCASE("nonpositive b is rejected") {
        ErmakovProfile bad;
        bad.poly_s = Polynomial({0.5, 0.0, -4.0});  // dips negative inside [0,1]
        bad.tau_f = p.tau_f();
        CHECK_THROWS_AS(omega_from_b(bad, p), std::domain_error);
    }
}

TEST_CASE("adiabatic ramp") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    auto sched = adiabatic_schedule(p);
    CHECK(sched.omega(0.0) == p.omega0);
    CHECK(sched.omega(p.t_f) == p.omega_f);
    CHECK(sched.omega(0.5 * p.t_f) ==
          doctest::Approx(0.5 * (p.omega0 + p.omega_f)).epsilon(1e-14));
}

TEST_CASE("ermakov residual") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    SUBCASE("inverse-engineered schedules satisfy the equation") {
        auto prof1 = sta1_profile(p);
        CHECK(ermakov_residual(prof1, omega_from_b(prof1, p), p) < 1e-9);
        auto prof2 = sta2_profile(p);
        CHECK(ermakov_residual(prof2, omega_from_b(prof2, p), p) < 1e-9);
    }
    SUBCASE("the linear ramp does not") {
        auto prof1 = sta1_profile(p);
        CHECK(ermakov_residual(prof1, adiabatic_schedule(p), p) > 1e-3);
    }
    SUBCASE("stationary solution has zero residual") {
        ErmakovProfile prof;
        prof.poly_s = Polynomial({1.0});
        prof.tau_f = p.tau_f();
        prof.scheme = Scheme::sta1;
        auto sched = omega_from_b(prof, p);
        CHECK(ermakov_residual(prof, sched, p) < 1e-14);
    }
}

TEST_CASE("identity protocol reaches unit fidelity") {
    auto p = SystemParams::from_dimensionless(20, 10.0, 1.0, 0.3, 1.0);
    auto gs = ground_state(p, p.omega0);
    auto sched = omega_from_b(sta1_profile(p), p);
    auto fin = propagate_final(gs, sched, p);
    CHECK(fidelity(ground_state(p, p.omega_f), fin) > 1.0 - 1e-8);
}

TEST_CASE("dimensionless collapse across time scales") {
    // equal (N, Lambda0, ratio, chi t_f) with different chi must give the
    // same fidelity and squeezing trajectories versus tau
    const double chi_a = 1.0;
    const double chi_b = 0.59823;
    auto pa = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, chi_a);
    auto pb = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, chi_b);
    for (int variant = 0; variant < 2; ++variant) {
        auto sched_a = variant == 0 ? omega_from_b(sta1_profile(pa), pa)
                                    : omega_from_b(sta2_profile(pa), pa);
        auto sched_b = variant == 0 ? omega_from_b(sta1_profile(pb), pb)
                                    : omega_from_b(sta2_profile(pb), pb);
        std::vector<double> ta, tb;
        for (int i = 0; i <= 8; ++i) {
            const double tau = 0.16 * i / 8.0;
            ta.push_back(tau / chi_a);
            tb.push_back(tau / chi_b);
        }
        auto sa = propagate(ground_state(pa, pa.omega0), sched_a, pa, ta);
        auto sb = propagate(ground_state(pb, pb.omega0), sched_b, pb, tb);
        auto tgt_a = ground_state(pa, pa.omega_f);
        auto tgt_b = ground_state(pb, pb.omega_f);
        for (size_t i = 0; i < sa.size(); ++i) {
            CHECK(std::abs(fidelity(tgt_a, sa[i]) - fidelity(tgt_b, sb[i])) < 1e-8);
            CHECK(std::abs(number_squeezing(sa[i], 50) - number_squeezing(sb[i], 50)) < 1e-8);
        }
    }
}

TEST_CASE("sampled schedules interpolate") {
    SystemParams p;
    p.particle_count = 4;
    p.chi = 1.0;
    p.omega0 = 1.0;
    p.omega_f = 1.0;
    p.t_f = 1.0;
    auto sched = sampled_schedule(p, {0.0, 0.5, 1.0}, {1.0, 3.0, 2.0});
    CHECK(sched.omega(0.25) == doctest::Approx(2.0));
    CHECK(sched.omega(0.75) == doctest::Approx(2.5));
    CHECK(sched.omega(-1.0) == doctest::Approx(1.0));  // clamped
    CHECK_THROWS_AS(sampled_schedule(p, {0.0}, {1.0}), std::domain_error);
    CHECK_THROWS_AS(sampled_schedule(p, {1.0, 0.0}, {1.0, 2.0}), std::domain_error);
}

TEST_SUITE_END();
