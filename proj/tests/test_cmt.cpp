#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loopres/cmt.hpp"
#include "test_util.hpp"

using namespace loopres;

TEST_CASE("critical kappa") {
    CHECK(critical_kappa(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(critical_kappa(30.0, 1.0) == doctest::Approx(std::sqrt(900.25)).epsilon(1e-15));
    // phase of xi11 is irrelevant
    for (double phi : {0.1, 1.3, 2.9, 4.4, 6.0})
        CHECK(critical_kappa(std::polar(30.0, phi), 1.0) ==
              doctest::Approx(std::sqrt(900.25)).epsilon(1e-15));
    CHECK_THROWS_AS(critical_kappa(1.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(critical_kappa(1.0, -2.0), invalid_parameter);
}

TEST_CASE("dynamics matrix structure") {
    SUBCASE("decoupled diagonal case") {
        LoopSystem sys; // all xi = 0, gamma = 1, kappa = 0.5
        const Matrix6c M = build_dynamics_matrix(sys);
        const double diag[6] = {-1.0, -1.0, -0.5, -0.5, -0.5, -0.5};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                if (i == j)
                    CHECK(M(i, j) == cplx(diag[i], 0.0));
                else
                    CHECK(M(i, j) == cplx(0.0, 0.0));
            }
    }
    SUBCASE("single scattering block") {
        LoopSystem sys;
        const cplx h = std::polar(3.0, 0.7);
        sys.set_xi(1, 1, h);
        const Matrix6c M = build_dynamics_matrix(sys);
        CHECK(M(0, 1) == cplx(0, -1) * h);
        CHECK(M(1, 0) == cplx(0, -1) * std::conj(h));
        CHECK(M(0, 3) == cplx(0.0, 0.0));
    }
    SUBCASE("cross coupling entries") {
        LoopSystem sys;
        const cplx xi12 = std::polar(2.0, 1.1);
        sys.set_xi(1, 2, xi12);
        const Matrix6c M = build_dynamics_matrix(sys);
        CHECK(M(0, 3) == cplx(0, -1) * xi12);          // a1 <- b2
        CHECK(M(3, 0) == cplx(0, -1) * std::conj(xi12)); // b2 <- a1
        CHECK(M(2, 1) == cplx(0, -1) * xi12);          // a2 <- b1
        CHECK(M(1, 2) == cplx(0, -1) * std::conj(xi12)); // b1 <- a2
    }
    SUBCASE("detuning and decay on the diagonal") {
        LoopSystem sys;
        sys.set_detuning(7.0);
        sys.kappa = 2.0;
        const Matrix6c M = build_dynamics_matrix(sys);
        CHECK(M(0, 0) == cplx(-(2.0 * 2.0 + 1.0) / 2.0, -7.0));
        CHECK(M(2, 2) == cplx(-0.5, -7.0));
    }
}

TEST_CASE("critical coupling extinguishes transmission") {
    LoopSystem sys; // all xi = 0, kappa = critical = 0.5
    const SteadyState s = solve_steady_state(sys);
    CHECK(std::abs(s.amplitudes[0] - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(s.a_out) < 1e-14);
    CHECK(s.T < 1e-14);
    CHECK(s.R < 1e-14);
    CHECK(s.occupancy_a1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-cavity Lorentzian line") {
    // All xi = 0 at critical coupling: T = Delta^2 / (Delta^2 + (kappa + gamma/2)^2).
    LoopSystem sys;
    for (double d : {0.0, 0.3, 1.0, 5.0, -12.0, 1000.0}) {
        sys.set_detuning(d);
        const SteadyState s = solve_steady_state(sys);
        const double expect = d * d / (d * d + 1.0);
        CHECK(s.T == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("transmission at the first side resonances") {
    // Loop parameters with phi12 = 0.2 pi: T(+-20) = 0.82 +- 0.02.
    LoopSystem sys = test::fig3b_system();
    for (double d : {20.0, -20.0}) {
        sys.set_detuning(d);
        const SteadyState s = solve_steady_state(sys);
        CHECK(std::abs(s.T - 0.82) < 0.02);
        // cavity 1 nearly empty there
        CHECK(s.occupancy_a1 < 0.05);
        CHECK(s.R < 0.02);
    }

    // All-real couplings: deep dips sit close to (not exactly at) +-20.
    LoopSystem a = test::fig3a_system();
    double dip_p = 1.0, dip_m = 1.0, at20 = 1.0, dip_where = 0.0;
    for (double d = 17.0; d <= 23.0; d += 0.05) {
        a.set_detuning(d);
        if (const double t = solve_steady_state(a).T; t < dip_p) {
            dip_p = t;
            dip_where = d;
        }
        a.set_detuning(-d);
        dip_m = std::min(dip_m, solve_steady_state(a).T);
    }
    a.set_detuning(20.0);
    at20 = solve_steady_state(a).T;
    CHECK(dip_p < 0.005);
    CHECK(dip_m < 0.005);
    CHECK(at20 < 0.03);
    // destructive-interference reading at the dip: phase of a1 vanishes and
    // the scaled occupancy sits near one
    a.set_detuning(dip_where);
    const SteadyState at_dip = solve_steady_state(a);
    CHECK(at_dip.phi_a < 0.1);
    CHECK(at_dip.occupancy_a1 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("stationarity residual") {
    test::SystemGen gen;
    for (int trial = 0; trial < 25; ++trial) {
        const LoopSystem sys = gen.system();
        const SteadyState s = solve_steady_state(sys);
        const double drive_norm = std::sqrt(2.0 * sys.kappa) * std::abs(sys.a_in);
        CHECK(stationarity_residual(sys, s) <= 1e-10 * drive_norm);
    }
}

TEST_CASE("time integration agrees with the linear solve") {
    SUBCASE("decoupled critical case") {
        LoopSystem sys;
        const SteadyState s = integrate_to_steady(sys);
        CHECK(s.T < 1e-8);
    }
    SUBCASE("randomized parameter suite") {
        test::SystemGen gen(0xabcdef12u);
        for (int trial = 0; trial < 30; ++trial) {
            const LoopSystem sys = gen.system(50.0, 100.0);
            const SteadyState a = solve_steady_state(sys);
            const SteadyState b = integrate_to_steady(sys);
            for (int k = 0; k < 6; ++k)
                CHECK(std::abs(a.amplitudes[k] - b.amplitudes[k]) < 1e-8);
        }
    }
    SUBCASE("roundtrip parameters") {
        LoopSystem sys = test::roundtrip_system(5.0);
        sys.set_detuning(-19.5);
        const SteadyState a = solve_steady_state(sys);
        const SteadyState b = integrate_to_steady(sys);
        CHECK(std::abs(a.T - b.T) < 1e-6);
        CHECK(std::abs(a.R - b.R) < 1e-6);
    }
}

TEST_CASE("integration reports non-convergence") {
    LoopSystem sys = test::fig3a_system();
    CHECK_THROWS_AS(integrate_to_steady(sys, /*t_end=*/0.05), convergence_error);
}

TEST_CASE("drive-phase covariance") {
    test::SystemGen gen(0x7701ull);
    for (int trial = 0; trial < 10; ++trial) {
        LoopSystem sys = gen.system();
        const SteadyState base = solve_steady_state(sys);
        const double chi = gen.uniform(0.0, 2.0 * M_PI);
        sys.a_in *= std::polar(1.0, chi);
        const SteadyState rot = solve_steady_state(sys);
        CHECK(rot.T == doctest::Approx(base.T).epsilon(1e-12));
        CHECK(rot.R == doctest::Approx(base.R).epsilon(1e-12));
        for (int k = 0; k < 6; ++k)
            CHECK(std::abs(rot.amplitudes[k] - base.amplitudes[k] * std::polar(1.0, chi)) <
                  1e-10 * (1.0 + std::abs(base.amplitudes[k])));
    }
}

TEST_CASE("conjugation symmetry") {
    test::SystemGen gen(0x1357ull);
    for (int trial = 0; trial < 10; ++trial) {
        LoopSystem sys = gen.system();
        const SteadyState base = solve_steady_state(sys);
        LoopSystem conj = sys;
        for (int i = 1; i <= 3; ++i)
            for (int j = i; j <= 3; ++j) conj.set_xi(i, j, std::conj(sys.xi(i, j)));
        for (int l = 0; l < 3; ++l) conj.delta[l] = -sys.delta[l];
        const SteadyState mirrored = solve_steady_state(conj);
        CHECK(mirrored.T == doctest::Approx(base.T).epsilon(1e-12));
        CHECK(mirrored.R == doctest::Approx(base.R).epsilon(1e-12));
        // a-sector amplitudes conjugate; b-sector ones pick up the bipartite
        // sign (the a/b parity similarity), leaving every observable intact.
        for (int k = 0; k < 6; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(mirrored.amplitudes[k] - sign * std::conj(base.amplitudes[k])) <
                  1e-10);
        }
        CHECK(mirrored.phi_a == doctest::Approx(base.phi_a).epsilon(1e-10));
    }
}

TEST_CASE("scattering phase alone does not change the outputs") {
    // Isolated resonator 1: T, R independent of arg(xi11).
    LoopSystem sys;
    sys.set_xi(1, 1, 30.0);
    sys.kappa = critical_kappa(sys.xi(1, 1), 1.0);
    sys.set_detuning(11.0);
    const SteadyState base = solve_steady_state(sys);
    for (int k = 1; k < 16; ++k) {
        const SteadyState s = solve_steady_state(with_phase(sys, {1, 1}, 2.0 * M_PI * k / 16));
        CHECK(std::abs(s.T - base.T) < 1e-10);
        CHECK(std::abs(s.R - base.R) < 1e-10);
    }
}

TEST_CASE("two-cavity coupling phase cancels") {
    LoopSystem sys;
    sys.set_xi(1, 1, 30.0);
    sys.set_xi(1, 2, 25.0);
    sys.kappa = critical_kappa(sys.xi(1, 1), 1.0);
    sys.set_detuning(-7.0);
    const SteadyState base = solve_steady_state(sys);
    for (int k = 1; k < 16; ++k) {
        const SteadyState s = solve_steady_state(with_phase(sys, {1, 2}, 2.0 * M_PI * k / 16));
        CHECK(std::abs(s.T - base.T) < 1e-10);
        CHECK(std::abs(s.R - base.R) < 1e-10);
    }
}

TEST_CASE("loop without scattering is phase independent") {
    LoopSystem sys;
    sys.set_xi(1, 2, 25.0);
    sys.set_xi(1, 3, 18.0);
    sys.set_xi(2, 3, 12.0);
    sys.kappa = critical_kappa(0.0, 1.0);
    sys.set_detuning(7.3);
    const SteadyState base = solve_steady_state(sys);
    test::SystemGen gen(0x999ull);
    for (int trial = 0; trial < 12; ++trial) {
        LoopSystem rot = sys;
        rot.set_xi(1, 2, std::polar(25.0, gen.uniform(0.0, 2 * M_PI)));
        rot.set_xi(1, 3, std::polar(18.0, gen.uniform(0.0, 2 * M_PI)));
        rot.set_xi(2, 3, std::polar(12.0, gen.uniform(0.0, 2 * M_PI)));
        const SteadyState s = solve_steady_state(rot);
        CHECK(std::abs(s.T - base.T) < 1e-10);
        CHECK(std::abs(s.R - base.R) < 1e-10);
    }
}

TEST_CASE("phase accessor range") {
    LoopSystem sys;
    sys.set_xi(1, 2, cplx(-3.0, 0.0)); // arg would give -pi or +pi
    CHECK(sys.phase(1, 2) == M_PI);
    sys.set_xi(1, 2, std::polar(2.0, -0.4));
    CHECK(sys.phase(1, 2) == doctest::Approx(-0.4));
    CHECK(sys.phase(2, 3) == 0.0); // zero modulus
    CHECK(sys.phase(1, 2) > -M_PI);
    CHECK(sys.phase(1, 2) <= M_PI);
}

TEST_CASE("invalid parameters are rejected") {
    LoopSystem sys;
    sys.gamma[1] = 0.0;
    CHECK_THROWS_AS(solve_steady_state(sys), invalid_parameter);
    sys.gamma[1] = 1.0;
    sys.kappa = -1.0;
    CHECK_THROWS_AS(build_dynamics_matrix(sys), invalid_parameter);
}
