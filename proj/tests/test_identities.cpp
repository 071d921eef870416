#include <catch2/catch_amalgamated.hpp>

#include <spinorsim/algebra.hpp>

using namespace spinorsim;

TEST_CASE("operator identity suite for N up to 12") {
    for (int n : {1, 2, 3, 5, 8, 12}) {
        IdentityReport rep = verify_identities(n);
        INFO("N = " << n);
        CHECK(rep.eq_l2_decomposition <= 1e-10 * std::max(1.0, rep.l2_scale));
        CHECK(rep.singlet_coeff3 <= 1e-10);
        if (n >= 2) CHECK(rep.singlet_coeff1 > 1e-3); // coefficient 1 must fail once A acts
        CHECK(rep.max_commutator() <= 1e-12);
        CHECK(rep.bch_match == "eta^2");
        CHECK(rep.bch_printed > 1e-6);
    }
}

TEST_CASE("identity suite refuses oversized dense work") {
    REQUIRE_THROWS_AS(verify_identities(21), resource_error);
}

TEST_CASE("hand-checked diagonal entries of the hypercharge decomposition") {
    // N=1, (1,0,0): 17/8 - 2(1/3 + 5/12)^2 + 4 T3^2 ... collapsed to L2 = 2
    IdentityReport rep1 = verify_identities(1);
    REQUIRE(rep1.eq_l2_decomposition <= 1e-12);
    // N=2, (0,2,0): diagonal must equal the L2 diagonal 4
    IdentityReport rep2 = verify_identities(2);
    REQUIRE(rep2.eq_l2_decomposition <= 1e-12);
}
