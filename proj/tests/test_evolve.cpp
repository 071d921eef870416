#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <spinorsim/evolve.hpp>
#include <spinorsim/ground.hpp>

using namespace spinorsim;

namespace {

constexpr double pi = 3.14159265358979323846;

CoherentSpec random_coherent(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::array<cplx, 3> a;
    double n2 = 0.0;
    for (auto& x : a) {
        x = cplx(g(rng), g(rng));
        n2 += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(n2);
    return CoherentSpec{a, n};
}

} // namespace

TEST_CASE("diagonalize_block meets the eigensystem contract") {
    for (int m : {0, 3, -7}) {
        OperatorMatrix h = hamiltonian_block(ModelParams{}, BlockKey{25, m});
        EigenSystem eig = diagonalize_block(h);
        const std::size_t n = h.entries.rows;
        const double scale = max_abs(h.entries);
        for (std::size_t k = 0; k < n; ++k) {
            // residual ||Hv - lambda v||
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cplx hv = 0.0;
                for (std::size_t j = 0; j < n; ++j) hv += h.entries(i, j) * eig.eigenvectors(j, k);
                resid = std::max(resid, std::abs(hv - eig.eigenvalues[k] * eig.eigenvectors(i, k)));
            }
            REQUIRE(resid <= 1e-10 * scale);
            if (k + 1 < n) REQUIRE(eig.eigenvalues[k] <= eig.eigenvalues[k + 1]);
        }
        // orthonormality
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    dot += eig.eigenvectors(i, a) * eig.eigenvectors(i, b);
                REQUIRE(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
            }
    }
    SECTION("1x1 block") {
        EigenSystem eig = diagonalize_block(hamiltonian_block(ModelParams{}, BlockKey{4, 4}));
        REQUIRE(eig.eigenvalues.size() == 1);
    }
    SECTION("N=2 ferromagnetic m=0 eigenvalues") {
        EigenSystem eig = diagonalize_block(hamiltonian_block(ModelParams{}, BlockKey{2, 0}));
        REQUIRE(eig.eigenvalues[0] == Catch::Approx(-2.0));
        REQUIRE(eig.eigenvalues[1] == Catch::Approx(4.0));
    }
}

TEST_CASE("block spectrum law for N <= 40") {
    for (int n : {5, 18, 40}) {
        ModelParams p;
        p.lambda_a = -1.0;
        for (int m = -n; m <= n; ++m) {
            EigenSystem eig = diagonalize_block(hamiltonian_block(p, BlockKey{n, m}));
            std::vector<double> want;
            for (int l = std::abs(m) + ((n - std::abs(m)) % 2); l <= n; l += 2)
                want.push_back(-(double(l) * (l + 1) - 2.0 * n));
            std::sort(want.begin(), want.end());
            REQUIRE(want.size() == eig.eigenvalues.size());
            for (std::size_t i = 0; i < want.size(); ++i)
                REQUIRE(std::abs(eig.eigenvalues[i] - want[i]) <=
                        1e-9 * std::max(1.0, std::abs(want[i])));
        }
    }
}

TEST_CASE("evolution basics") {
    std::mt19937_64 rng(3);
    StateVector psi0 = coherent_state(random_coherent(20, rng));
    ModelParams p;
    SECTION("t = 0 is the identity") {
        StateVector psi = evolve(psi0, p, 0.0);
        REQUIRE(std::abs(inner(psi0, psi) - cplx(1.0)) <= 1e-12);
    }
    SECTION("norm is preserved") {
        REQUIRE(std::abs(evolve(psi0, p, 0.7).norm() - 1.0) <= 1e-12);
    }
    SECTION("exact revival at t = pi") {
        REQUIRE(std::abs(inner(psi0, evolve(psi0, p, pi))) >= 1.0 - 1e-9);
    }
    SECTION("stationary eta = 1 state keeps its populations") {
        StateVector st = coherent_state(CoherentSpec::from_populations(20, 0.5, 0.0));
        double base[3];
        for (int mode = 0; mode < 3; ++mode)
            base[mode] = population_observer("p", mode).eval(st);
        for (double t : {0.3, 1.1, 2.9}) {
            StateVector psi = evolve(st, p, t);
            for (int mode = 0; mode < 3; ++mode)
                REQUIRE(population_observer("p", mode).eval(psi) ==
                        Catch::Approx(base[mode]).margin(1e-9));
        }
    }
}

TEST_CASE("dual-oracle agreement") {
    std::mt19937_64 rng(17);
    ModelParams p;
    p.lambda_s = 0.2; // exercise the constant terms too
    p.mu = -0.4;
    for (int trial = 0; trial < 8; ++trial) {
        StateVector psi0 = coherent_state(random_coherent(15, rng));
        for (double t : {0.1, 1.0, pi}) {
            StateVector a = evolve(psi0, p, t);
            StateVector b = evolve_oracle_angular(psi0, p, t);
            REQUIRE(std::abs(inner(a, b)) >= 1.0 - 1e-8);
        }
    }
    SECTION("angular eigenstates only pick up a phase") {
        StateVector psi0 = angular_state(AngularLabel{8, 2, 12});
        StateVector psi = evolve_oracle_angular(psi0, ModelParams{}, 0.77);
        REQUIRE(std::abs(std::abs(inner(psi0, psi)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("magnetic evolution stays unitary and reduces to the block path") {
    ModelParams p;
    p.magnetic = MagneticParams{0.3, 0.1, -0.2};
    std::mt19937_64 rng(29);
    StateVector psi0 = coherent_state(random_coherent(8, rng));
    StateVector psi = evolve(psi0, p, 1.3);
    REQUIRE(std::abs(psi.norm() - 1.0) <= 1e-10);

    ModelParams zero_b;
    zero_b.magnetic = MagneticParams{0.0, 0.0, 0.0};
    StateVector a = evolve(psi0, zero_b, 0.9);
    StateVector b = evolve(psi0, ModelParams{}, 0.9);
    REQUIRE(std::abs(inner(a, b)) >= 1.0 - 1e-10);
}

TEST_CASE("time series") {
    StateVector psi0 = fock_state(ModeOccupation{0, 30, 0});
    std::vector<Observer> obs{population_observer("n_zero", 1), population_observer("n_minus", 0),
                              population_observer("n_plus", 2)};
    TimeGrid grid{0.0, pi, 65};
    TimeSeries ts = time_series(psi0, ModelParams{}, grid, obs);
    REQUIRE(ts.columns == std::vector<std::string>{"t", "n_zero", "n_minus", "n_plus"});
    REQUIRE(ts.rows.size() == 65);
    REQUIRE(ts.rows[0][1] == Catch::Approx(30.0));
    REQUIRE(ts.rows[0][2] == Catch::Approx(0.0).margin(1e-12));
    for (const auto& row : ts.rows)
        REQUIRE(row[1] + row[2] + row[3] == Catch::Approx(30.0).margin(1e-10));
    // periodicity: the grid includes both endpoints of one revival period
    for (std::size_t j = 1; j < 4; ++j)
        REQUIRE(ts.rows.front()[j] == Catch::Approx(ts.rows.back()[j]).margin(1e-8));
}

TEST_CASE("grid validation") {
    REQUIRE_THROWS_AS((TimeGrid{0.0, 1.0, 0}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((TimeGrid{1.0, 0.5, 4}.validate()), std::invalid_argument);
    REQUIRE_NOTHROW((TimeGrid{0.3, 0.3, 1}.validate()));
}
