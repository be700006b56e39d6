#include <doctest.h>

#include "qpolar/catalog.hpp"
#include "qpolar/matfun.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/singular.hpp"

using namespace qpolar;

TEST_CASE("catalog symbols are accretive and well-formed") {
    for (const ExampleSpec& ex :
         {harmonic(1), harmonic(2), kfp(1), kfp(2), kolmogorov(),
          ou_default()}) {
        CHECK(is_symmetric(ex.symbol.Q, 1e-12).ok);
        CHECK(is_psd(ex.symbol.re().cast<Complex>(), 1e-10).ok);
        const SingularSpaceInfo info = singular_space(ex.symbol);
        if (ex.expected_k0 >= 0) CHECK(info.k0 == ex.expected_k0);
        if (ex.expected_dim_S >= 0)
            CHECK(static_cast<int>(info.dim_S()) == ex.expected_dim_S);
    }
}

TEST_CASE("expected closed forms match computations") {
    const ExampleSpec h = harmonic(2);
    for (double t : {0.1, 0.7}) {
        CHECK(spectral_norm(RMat(a_matrix(h.symbol, t) - h.expected_A(t))) <=
              1e-12);
        const auto b = b_matrix(h.symbol, t);
        REQUIRE(b.has_value());
        CHECK(spectral_norm(RMat(*b - h.expected_B(t))) <= 1e-12);
    }
}

TEST_CASE("random_accretive determinism and structure") {
    const QuadraticSymbol a = random_accretive(2, 42);
    const QuadraticSymbol b = random_accretive(2, 42);
    // byte-identical across constructions
    CHECK(spectral_norm(CMat(a.Q - b.Q)) == 0.0);
    const QuadraticSymbol c = random_accretive(2, 43);
    CHECK(spectral_norm(CMat(a.Q - c.Q)) > 0.0);

    // im_scale = 0 gives a real symbol
    const QuadraticSymbol real_q = random_accretive(3, 7, 0.0);
    CHECK(spectral_norm(RMat(real_q.im())) == 0.0);

    for (unsigned seed = 0; seed < 40; ++seed) {
        const QuadraticSymbol q = random_accretive(2, seed);
        CHECK(is_psd(q.re().cast<Complex>(), 1e-10).ok);
        CHECK(is_symmetric(q.Q, 1e-12).ok);
    }
}

TEST_CASE("rank-deficient draws produce nontrivial singular spaces") {
    int nontrivial = 0;
    for (unsigned seed = 0; seed < 60; ++seed) {
        const QuadraticSymbol q = random_accretive(2, seed);
        if (singular_space(q).dim_S() > 0) ++nontrivial;
    }
    CHECK(nontrivial > 5);  // S = {0} is generic; deficiency must show up
}

TEST_CASE("random symbols pass the polar invariant smoke test") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const QuadraticSymbol q = random_accretive(2, seed);
        const PolarFactors f = polar_factors(q, 0.15);
        CHECK(is_psd(f.A.cast<Complex>(), 1e-9).ok);
        CHECK(f.residuals.at("k_vs_exp_a") <= 1e-9);
        CHECK(f.residuals.at("psd_gap") <= 1e-10);
        if (f.B) CHECK(f.residuals.at("factorization") <= 1e-9);
    }
}

TEST_CASE("find_example") {
    CHECK(find_example("harmonic:2").symbol.n == 2);
    CHECK(find_example("kfp:1").symbol.n == 2);  // phase space R^4
    CHECK(find_example("kolmogorov").symbol.n == 2);
    CHECK(find_example("ou").symbol.n == 2);
    CHECK_THROWS_AS(find_example("nope"), InputError);
    CHECK_THROWS_AS(find_example("harmonic:0"), InputError);
    CHECK_THROWS_AS(find_example("kolmogorov:3"), InputError);
}
