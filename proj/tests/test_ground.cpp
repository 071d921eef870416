#include <catch2/catch_amalgamated.hpp>

#include <spinorsim/ground.hpp>
#include <spinorsim/prepare.hpp>

using namespace spinorsim;

TEST_CASE("ferromagnetic ground state structure") {
    const int n = 200;
    GroundState g = ground_state(n, 0, ModelParams{});
    SECTION("energy matches the closed form for l = N") {
        REQUIRE(g.energy == Catch::Approx(-(double(n) * (n + 1) - 2.0 * n)).epsilon(1e-10));
    }
    SECTION("populations approach (N/4, N/2, N/4)") {
        FragmentationReport rep = one_particle_density(g.state);
        REQUIRE(std::real(rep.density.entries[1][1]) == Catch::Approx(n / 2.0).epsilon(0.01));
        REQUIRE(std::real(rep.density.entries[0][0]) == Catch::Approx(n / 4.0).epsilon(0.02));
        REQUIRE(std::real(rep.density.entries[2][2]) == Catch::Approx(n / 4.0).epsilon(0.02));
        REQUIRE(rep.fragmented);
        REQUIRE(rep.density.trace() == Catch::Approx(double(n)).margin(1e-9));
    }
    SECTION("m = 0 and m = 1 ground energies are degenerate") {
        GroundState g1 = ground_state(n, 1, ModelParams{});
        REQUIRE(std::abs(g.energy - g1.energy) <= 1e-9 * std::abs(g.energy));
    }
    SECTION("the ground state is the l = N angular state") {
        StateVector ln = angular_state(AngularLabel{n, 0, n}, AngularMethod::numeric);
        REQUIRE(std::abs(inner(g.state, ln)) >= 1.0 - 1e-10);
    }
}

TEST_CASE("polar ground state is the singlet ladder bottom") {
    ModelParams polar;
    polar.lambda_a = 1.0;
    GroundState g = ground_state(30, 0, polar);
    REQUIRE(std::abs(std::real(expectation(g.state, OperatorKind::L2))) <= 1e-8);
}

TEST_CASE("gaussian profile") {
    SECTION("normalized and peaked near n_zero = N/2") {
        const int n = 120;
        StateVector psi = gaussian_profile(n);
        REQUIRE(std::abs(psi.norm_sq() - 1.0) <= 1e-12);
        FockBlock block(n, 0);
        int argmax = 0;
        double best = 0.0;
        const auto& amps = psi.blocks.at(0);
        for (int i = 0; i < block.dimension(); ++i)
            if (std::abs(amps[i]) > best) {
                best = std::abs(amps[i]);
                argmax = block.state_at(i).n_zero;
            }
        REQUIRE(std::abs(argmax - n / 2) <= 2);
    }
    SECTION("overlap with the exact ground state") {
        const int n = 400;
        StateVector gauss = gaussian_profile(n);
        GroundState g = ground_state(n, 0, ModelParams{});
        REQUIRE(std::norm(inner(g.state, gauss)) >= 0.99);
    }
    SECTION("preconditions") {
        REQUIRE_THROWS_AS(gaussian_profile(3), std::invalid_argument);
        REQUIRE_THROWS_AS(gaussian_profile(7), std::invalid_argument);
    }
}

TEST_CASE("chain solver") {
    const int n = 400;
    ChainResult even = chain_solver(n, ChainParity::even);
    ChainResult odd = chain_solver(n, ChainParity::odd);
    SECTION("even ground vector tracks the gaussian profile") {
        StateVector gauss = gaussian_profile(n);
        const auto& amps = gauss.blocks.at(0);
        double overlap = 0.0;
        for (std::size_t i = 0; i < even.n_zero_sites.size(); ++i)
            overlap += even.vectors(i, 0) * std::real(amps[i]);
        REQUIRE(std::abs(overlap) >= 0.99);
    }
    SECTION("even/odd near-degeneracy") {
        const double gap = std::abs(even.energies[0] - odd.energies[0]) /
                           std::max(1.0, std::abs(even.energies[0]));
        REQUIRE(gap <= 3.0 / n);
    }
    SECTION("even ground vs the physical ground state") {
        GroundState g = ground_state(n, 0, ModelParams{});
        const auto& amps = g.state.blocks.at(0);
        double overlap = 0.0;
        for (std::size_t i = 0; i < even.n_zero_sites.size(); ++i)
            overlap += even.vectors(i, 0) * std::real(amps[i]);
        REQUIRE(std::abs(overlap) >= 0.98);
    }
}

TEST_CASE("one-particle density on reference states") {
    SECTION("Fock |0,N,0> is condensed in the zero mode") {
        FragmentationReport rep = one_particle_density(fock_state(ModeOccupation{0, 40, 0}));
        REQUIRE(std::real(rep.density.entries[1][1]) == Catch::Approx(40.0));
        REQUIRE(std::abs(rep.density.entries[0][0]) <= 1e-12);
        REQUIRE(!rep.fragmented);
    }
    SECTION("coherent states are rank one") {
        const int n = 30;
        StateVector psi = coherent_state(CoherentSpec::from_populations(n, 0.4, 0.9));
        FragmentationReport rep = one_particle_density(psi);
        REQUIRE(rep.eigenvalues[2] == Catch::Approx(double(n)).margin(1e-9));
        REQUIRE(std::abs(rep.eigenvalues[0]) <= 1e-9 * n);
        REQUIRE(std::abs(rep.eigenvalues[1]) <= 1e-9 * n);
        REQUIRE(!rep.fragmented);
        double sum = rep.eigenvalues[0] + rep.eigenvalues[1] + rep.eigenvalues[2];
        REQUIRE(sum == Catch::Approx(double(n)).margin(1e-9));
    }
}
