#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <spinorsim/evolve.hpp>
#include <spinorsim/prepare.hpp>
#include <spinorsim/squeeze.hpp>

#include "oracle.hpp"

using namespace spinorsim;

namespace {

constexpr double pi = 3.14159265358979323846;

StateVector random_state(int total_n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    StateVector psi(total_n);
    for (const FockBlock& b : enumerate_full(total_n)) {
        if (b.dimension() == 0) continue;
        for (auto& a : psi.block(b.magnetization())) a = cplx(g(rng), g(rng));
    }
    psi.normalize();
    return psi;
}

// brute-force quadrature matrices over the oracle basis
oracle::Mat x_quad(int n, double alpha, bool v_spin) {
    oracle::Mat lower = v_spin ? oracle::v_minus(n) : oracle::u_minus(n);
    oracle::Mat m = oracle::add(oracle::scale(std::polar(1.0, alpha), lower),
                                oracle::scale(std::polar(1.0, -alpha), oracle::dagger(lower)));
    return oracle::scale(1.0 / std::sqrt(2.0), m);
}

oracle::Mat q_quad(int n, int sign, double alpha) {
    return oracle::scale(0.5, sign > 0 ? oracle::add(x_quad(n, alpha, true), x_quad(n, alpha, false))
                                       : oracle::sub(x_quad(n, alpha, true), x_quad(n, alpha, false)));
}

} // namespace

TEST_CASE("Fock |0,N,0> threshold values") {
    const int n = 100;
    StateVector psi = fock_state(ModeOccupation{0, n, 0});
    SECTION("quadrature variances") {
        QuadratureStats q = quadrature_stats(psi, 0.37);
        REQUIRE(q.var_xu == Catch::Approx(n / 2.0));
        REQUIRE(q.var_xv == Catch::Approx(n / 2.0));
        REQUIRE(q.var_qplus == Catch::Approx(n / 4.0));
        REQUIRE(q.var_qminus_perp == Catch::Approx(n / 4.0));
        REQUIRE(std::abs(q.c_uv) <= 1e-12);
    }
    SECTION("xi_uv = 3/4 exactly at any angle") {
        for (double a : {0.0, 0.4, 1.2, 2.9}) {
            SqueezeValue v = xi_uv(psi, a);
            REQUIRE(v.defined);
            REQUIRE(v.value == Catch::Approx(0.75).margin(1e-9));
        }
        SqueezeValue opt = xi_uv_min(psi);
        REQUIRE(opt.value == Catch::Approx(0.75).margin(1e-9));
    }
    SECTION("two-mode sum = 2 exactly") {
        TwoModeValue v = xi_pm(psi, 0.6);
        REQUIRE(v.defined);
        REQUIRE(v.xi_plus_sq == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(v.xi_minus_sq == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(v.sum == Catch::Approx(2.0).margin(1e-9));
    }
    SECTION("single excitation N=1") {
        StateVector one = fock_state(ModeOccupation{0, 1, 0});
        QuadratureStats q = quadrature_stats(one, 1.1);
        REQUIRE(q.var_xu == Catch::Approx(0.5));
        REQUIRE(q.var_xv == Catch::Approx(0.5));
    }
    SECTION("xi_phi is undefined on the isospin-symmetric Fock state") {
        REQUIRE(!xi_phi(psi, 0.3).defined);
        REQUIRE(!xi_phi_min(psi).defined);
    }
}

TEST_CASE("quadrature identity and bound on random states") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        StateVector psi = random_state(12, rng);
        const double alpha = 0.11 * trial;
        QuadratureStats q = quadrature_stats(psi, alpha);
        const double lhs = q.var_qplus + q.var_qminus_perp;
        const double rhs = 0.25 * (q.var_xu + q.var_xv + q.var_xu_perp + q.var_xv_perp) + q.c_uv;
        REQUIRE(std::abs(lhs - rhs) <= 1e-10);
        const double y = std::real(expectation(psi, OperatorKind::Y));
        REQUIRE(lhs >= 0.75 * std::abs(y) + q.c_uv - 1e-9);
    }
}

TEST_CASE("squeezing values match brute-force operator constructions") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 9;
        StateVector psi = random_state(n, rng);
        oracle::Vec v = oracle::to_vec(psi);
        const double alpha = 0.2 + 0.3 * trial;

        {
            QuadratureStats q = quadrature_stats(psi, alpha);
            REQUIRE(q.var_xu == Catch::Approx(oracle::variance(x_quad(n, alpha, false), v)).margin(1e-10));
            REQUIRE(q.var_xv == Catch::Approx(oracle::variance(x_quad(n, alpha, true), v)).margin(1e-10));
            REQUIRE(q.var_qplus ==
                    Catch::Approx(oracle::variance(q_quad(n, +1, alpha), v)).margin(1e-10));
            REQUIRE(q.var_qminus_perp ==
                    Catch::Approx(oracle::variance(q_quad(n, -1, alpha + pi / 2.0), v)).margin(1e-10));
        }
        {
            SqueezeValue uv = xi_uv(psi, alpha);
            const double y = std::real(oracle::expectation(oracle::hypercharge(n), v));
            if (std::abs(y) >= 1e-9 * n) {
                REQUIRE(uv.defined);
                const double want = (oracle::variance(q_quad(n, +1, alpha), v) +
                                     oracle::variance(q_quad(n, -1, alpha + pi / 2.0), v)) /
                                    std::abs(y);
                REQUIRE(uv.value == Catch::Approx(want).margin(1e-9));
            }
        }
        {
            TwoModeValue pm = xi_pm(psi, alpha);
            if (pm.defined) {
                const double y = std::real(oracle::expectation(oracle::hypercharge(n), v));
                const double tx = std::real(oracle::expectation(
                    oracle::scale(0.5, oracle::add(oracle::t_plus(n), oracle::t_minus(n))), v));
                const double jp = 0.5 * (1.5 * y + tx), jm = 0.5 * (1.5 * y - tx);
                const double qp_perp =
                    std::real(oracle::expectation(q_quad(n, +1, alpha + pi / 2.0), v));
                const double want_p = n * oracle::variance(q_quad(n, +1, alpha), v) /
                                      (qp_perp * qp_perp + jp * jp);
                REQUIRE(pm.xi_plus_sq == Catch::Approx(want_p).margin(1e-8));
                const double qm_perp =
                    std::real(oracle::expectation(q_quad(n, -1, alpha + pi), v));
                const double want_m = n * oracle::variance(q_quad(n, -1, alpha + pi / 2.0), v) /
                                      (qm_perp * qm_perp + jm * jm);
                REQUIRE(pm.xi_minus_sq == Catch::Approx(want_m).margin(1e-8));
            }
        }
        {
            const double phi = 0.5 + 0.17 * trial;
            SqueezeValue xp = xi_phi(psi, phi);
            oracle::Mat ty = oracle::scale(cplx(0.0, -0.5),
                                           oracle::sub(oracle::t_plus(n), oracle::t_minus(n)));
            oracle::Mat typ = oracle::add(oracle::scale(std::cos(phi), ty),
                                          oracle::scale(std::sin(phi), oracle::t3(n)));
            const double tx = std::real(oracle::expectation(
                oracle::scale(0.5, oracle::add(oracle::t_plus(n), oracle::t_minus(n))), v));
            const double tz = -std::sin(phi) * std::real(oracle::expectation(ty, v)) +
                              std::cos(phi) * std::real(oracle::expectation(oracle::t3(n), v));
            const double den = tx * tx + tz * tz;
            if (den >= 1e-12 * n * n) {
                REQUIRE(xp.defined);
                REQUIRE(xp.value ==
                        Catch::Approx(std::sqrt(n * oracle::variance(typ, v) / den)).margin(1e-9));
            }
        }
    }
}

TEST_CASE("angle periodicity and optimizers") {
    StateVector psi = evolve(fock_state(ModeOccupation{0, 40, 0}), ModelParams{}, 0.05);
    SECTION("xi_uv is pi-periodic in alpha") {
        for (double a : {0.1, 0.9, 2.2}) {
            SqueezeValue x1 = xi_uv(psi, a);
            SqueezeValue x2 = xi_uv(psi, a + pi);
            REQUIRE(x1.value == Catch::Approx(x2.value).margin(1e-10));
        }
    }
    SECTION("optimizer beats every grid sample") {
        SqueezeValue best = xi_uv_min(psi, 180);
        REQUIRE(best.defined);
        for (int i = 0; i < 360; ++i)
            REQUIRE(best.value <= xi_uv(psi, pi * i / 360.0).value + 1e-9);
        REQUIRE(best.angle >= 0.0);
        REQUIRE(best.angle < pi);
    }
    SECTION("the evolving Fock state becomes U-V squeezed") {
        double best_uv = 1e300, best_sum = 1e300;
        StateVector psi0 = fock_state(ModeOccupation{0, 40, 0});
        for (int i = 1; i <= 24; ++i) {
            StateVector pt = evolve(psi0, ModelParams{}, 0.01 * i);
            best_uv = std::min(best_uv, xi_uv_min(pt).value);
            best_sum = std::min(best_sum, xi_pm_min(pt).sum);
        }
        REQUIRE(best_uv < 0.75);
        REQUIRE(best_sum < 2.0);
    }
}

TEST_CASE("squeeze report consistency") {
    StateVector psi = evolve(fock_state(ModeOccupation{0, 30, 0}), ModelParams{}, 0.08);
    SqueezeReport rep = squeeze_report(psi, 0.08, 0.0, 2.0 * pi / 3.0);
    REQUIRE(rep.uv_defined);
    REQUIRE(rep.xi_uv_min <= rep.xi_uv_fixed + 1e-12);
    REQUIRE(rep.xi_uv_min == Catch::Approx(xi_uv_min(psi).value).margin(1e-9));
    REQUIRE(rep.pm_defined);
    REQUIRE(rep.two_mode_sum == Catch::Approx(rep.xi_plus_sq + rep.xi_minus_sq).margin(1e-12));
    REQUIRE(!rep.phi_defined); // isospin-symmetric initial state
}
