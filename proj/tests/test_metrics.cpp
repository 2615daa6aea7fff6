#include "doctest.h"

#include <cmath>

#include "bjj/bjj.hpp"
#include "oracles.hpp"

using namespace bjj;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("number squeezing reference points") {
    CHECK(number_squeezing(css_state(40), 40) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(number_squeezing(DickeState::basis_state(8, 0), 8) == doctest::Approx(0.0));

    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 1.0, 1.0);
    auto gs = ground_state(p, p.omega0);
    const double got = number_squeezing(gs, 50);
    CHECK(got > 0.0);
    CHECK(got < 1.0);
    // dense expectation oracle
    auto v = oracle::to_vec(gs);
    auto jz = oracle::jz_matrix(50);
    const double var = v.dot(jz * jz * v).real() - std::pow(v.dot(jz * v).real(), 2);
    CHECK(got == doctest::Approx(var / 12.5).epsilon(1e-10));
}

TEST_CASE("coherent spin squeezing") {
    CHECK(coherent_spin_squeezing(css_state(30), 30) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("matches dense oracle for the N = 2 ground state") {
        SystemParams p;
        p.particle_count = 2;
        p.chi = 1.0;
        p.omega0 = 1.0;
        p.omega_f = 1.0;
        p.t_f = 1.0;
        auto gs = ground_state(p, 1.0);
        auto v = oracle::to_vec(gs);
        auto jz = oracle::jz_matrix(2), jx = oracle::jx_matrix(2);
        const double var = v.dot(jz * jz * v).real() - std::pow(v.dot(jz * v).real(), 2);
        const double jxm = v.dot(jx * v).real();
        CHECK(coherent_spin_squeezing(gs, 2) ==
              doctest::Approx(2.0 * var / (jxm * jxm)).epsilon(1e-12));
    }
    SUBCASE("squeezed ground state is flagged entangled") {
        auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 1.0, 1.0);
        auto gs = ground_state(p, p.omega0);
        CHECK(coherent_spin_squeezing(gs, 50) < 1.0);
    }
    SUBCASE("vanishing mean spin is undefined, not infinite") {
        CHECK_THROWS_AS(coherent_spin_squeezing(DickeState::basis_state(4, 0), 4),
                        DivergenceError);
    }
    SUBCASE("relation to number squeezing through the coherence") {
        auto p = SystemParams::from_dimensionless(20, 5.0, 0.2, 1.0, 1.0);
        auto gs = ground_state(p, p.omega0);
        auto e = expectations(gs, 20);
        const double zeta = 2.0 * e.jx / 20.0;
        CHECK(coherent_spin_squeezing(gs, 20) ==
              doctest::Approx(number_squeezing(gs, 20) / (zeta * zeta)).epsilon(1e-12));
        CHECK(coherent_spin_squeezing(gs, 20) >= number_squeezing(gs, 20));
    }
}

TEST_CASE("decibel conversion") {
    CHECK(to_decibels(1.0) == doctest::Approx(0.0));
    CHECK(to_decibels(0.01) == doctest::Approx(-20.0).epsilon(1e-13));
    CHECK(to_decibels(std::pow(10.0, -1.8)) == doctest::Approx(-18.0).epsilon(1e-13));
    CHECK_THROWS_AS(to_decibels(0.0), std::domain_error);
    CHECK_THROWS_AS(to_decibels(-1.0), std::domain_error);
    SUBCASE("strictly monotone") {
        double prev = to_decibels(1e-4);
        for (double x = 2e-4; x < 1.0; x *= 1.7) {
            CHECK(to_decibels(x) > prev);
            prev = to_decibels(x);
        }
    }
}

TEST_CASE("fidelity properties") {
    auto a = oracle::random_state(12, 1);
    auto b = oracle::random_state(12, 2);
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-13));

    // global-phase invariance
    std::vector<Complex> shifted;
    for (auto c : a.amplitudes()) shifted.push_back(c * std::polar(1.0, 1.234));
    CHECK(fidelity(a, DickeState(12, shifted)) == doctest::Approx(1.0).epsilon(1e-13));

    CHECK(fidelity(DickeState::basis_state(4, 0), DickeState::basis_state(4, 1)) == 0.0);
    CHECK(fidelity(a, b) >= 0.0);
    CHECK(fidelity(a, b) < 1.0);

    CHECK_THROWS_AS(fidelity(oracle::random_state(4, 3), oracle::random_state(6, 3)),
                    std::domain_error);
}

TEST_CASE("maximal plane squeezing") {
    CHECK(max_plane_squeezing(css_state(24), 24) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(max_plane_squeezing(DickeState::basis_state(8, 0), 8) ==
          doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("twisted coherent state matches the angle scan") {
        SystemParams p;
        p.particle_count = 40;
        p.chi = 1.0;
        p.omega0 = 1.0;
        p.omega_f = 1.0;
        p.t_f = 0.01;
        auto st = propagate(css_state(40), oat_schedule(p), p, {p.t_f}).back();
        const double eigenroute = max_plane_squeezing(st, 40);
        const double scan = oracle::angle_scan_min_variance(st, 40, 10000);
        CHECK(eigenroute == doctest::Approx(scan).epsilon(1e-8));
    }
    SUBCASE("eigenvalue route equals angle scan on random states") {
        for (unsigned seed = 0; seed < 100; ++seed) {
            auto st = oracle::random_state(20, 500 + seed);
            const double eigenroute = max_plane_squeezing(st, 20);
            const double scan = oracle::angle_scan_min_variance(st, 20, 10000);
            CHECK(std::abs(eigenroute - scan) < 1e-6);
        }
    }
}

TEST_CASE("squeezing records") {
    auto p = SystemParams::from_dimensionless(50, 10.0, 0.1, 0.16, 1.0);
    auto gs = ground_state(p, p.omega0);
    auto target = ground_state(p, p.omega_f);
    auto rec = make_squeezing_record(0.0, gs, target, 50);
    CHECK(rec.xi_n_sq >= 0.0);
    CHECK(rec.fidelity >= 0.0);
    CHECK(rec.fidelity <= 1.0);
    CHECK(std::abs(rec.zeta) <= 1.0);
    // xi_S (linear) = xi_N / zeta^2
    const double xi_s_lin = std::pow(10.0, rec.xi_s_sq_db / 10.0);
    CHECK(xi_s_lin == doctest::Approx(rec.xi_n_sq / (rec.zeta * rec.zeta)).epsilon(1e-10));
    // undefined Wineland parameter becomes NaN in the record stream
    auto rec0 = make_squeezing_record(0.0, DickeState::basis_state(50, 0), target, 50);
    CHECK(std::isnan(rec0.xi_s_sq_db));
}

TEST_SUITE_END();
