#include <doctest.h>

#include "qpolar/catalog.hpp"
#include "qpolar/matfun.hpp"
#include "qpolar/singular.hpp"
#include "qpolar/symbols.hpp"

using namespace qpolar;

namespace {

/// Brute-force oracle: stack Re F (Im F)^j for j = 0 .. 2n-1 and take one
/// SVD kernel of the tall matrix. Independent of the incremental route.
RMat stacked_singular_space(const QuadraticSymbol& q, int j_max = -1) {
    const HamiltonMap f = hamilton_map(q);
    const Eigen::Index dim = q.dim();
    if (j_max < 0) j_max = static_cast<int>(dim) - 1;
    RMat stack((j_max + 1) * dim, dim);
    RMat pow = RMat::Identity(dim, dim);
    for (int j = 0; j <= j_max; ++j) {
        stack.middleRows(j * dim, dim) = f.re * pow;
        pow = (f.im * pow).eval();
    }
    return kernel_basis(stack, 1e-9);
}

/// Principal-angle distance between two subspaces given by orthonormal bases.
double subspace_gap(const RMat& a, const RMat& b) {
    if (a.cols() != b.cols()) return 1.0;
    if (a.cols() == 0) return 0.0;
    const RMat m = a.transpose() * b;
    const auto sv = m.jacobiSvd().singularValues();
    const double smin = sv(sv.size() - 1);
    return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

RVec unit(int dim, int i) {
    RVec v = RVec::Zero(dim);
    v(i) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("harmonic oscillator: S = {0}, k0 = 0") {
    const QuadraticSymbol q = harmonic(1).symbol;
    const SingularSpaceInfo info = singular_space(q);
    CHECK(info.dim_S() == 0);
    CHECK(info.k0 == 0);
    CHECK(info.Sperp_basis.cols() == 2);
    CHECK(stacked_singular_space(q).cols() == 0);

    // every nonzero direction has index 0
    CHECK(index_of(info, unit(2, 0)) == 0);
    CHECK(index_of(info, unit(2, 1)) == 0);
}

TEST_CASE("q = xi_2^2 on R^4: S = span{x1, x2, xi1}, k0 = 0") {
    CMat q = CMat::Zero(4, 4);
    q(3, 3) = 1.0;
    const QuadraticSymbol sym = QuadraticSymbol::make(2, q);
    const SingularSpaceInfo info = singular_space(sym);
    CHECK(info.dim_S() == 3);
    CHECK(info.k0 == 0);
    // S spans exactly {xi_2 = 0}
    RMat expected(4, 3);
    expected.setZero();
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    expected(2, 2) = 1.0;
    CHECK(subspace_gap(info.S_basis, expected) < 1e-12);
}

TEST_CASE("Kolmogorov: S is the x-plane, k0 = 1, indices") {
    const QuadraticSymbol q = kolmogorov().symbol;
    const SingularSpaceInfo info = singular_space(q);

    // brute-force kernel intersection of Re F and Re F Im F
    const RMat oracle = stacked_singular_space(q);
    CHECK(oracle.cols() == 2);
    CHECK(info.dim_S() == 2);
    CHECK(subspace_gap(info.S_basis, oracle) < 1e-12);
    CHECK(info.k0 == 1);

    // V_0 = Ker(Re F) contains e_{xi_1} but not e_{xi_2}
    CHECK(index_of(info, unit(4, 3)) == 0);  // xi_2
    CHECK(index_of(info, unit(4, 2)) == 1);  // xi_1

    // x-directions live in S
    CHECK_THROWS_AS(index_of(info, unit(4, 0)), NotInSperp);
    CHECK_THROWS_AS(index_of(info, unit(4, 1)), NotInSperp);
    CHECK_THROWS_AS(index_of(info, RVec(RVec::Zero(4))), ZeroVector);

    // scaling invariance
    CHECK(index_of(info, RVec(2.75 * unit(4, 2))) == 1);

    const StabilityReport st = check_singular_stability(q, info);
    CHECK(st.reF_residual <= 1e-12);
    CHECK(st.imF_residual <= 1e-12);
}

TEST_CASE("KFP: S is the x-block, k0 = 1, indices") {
    const QuadraticSymbol q = kfp(1).symbol;
    const SingularSpaceInfo info = singular_space(q);
    const RMat oracle = stacked_singular_space(q);
    CHECK(info.dim_S() == 1);
    CHECK(oracle.cols() == 1);
    CHECK(subspace_gap(info.S_basis, oracle) < 1e-12);
    CHECK(info.k0 == 1);

    // coordinates (x, v, xi, eta)
    CHECK(index_of(info, unit(4, 1)) == 0);  // v
    CHECK(index_of(info, unit(4, 2)) == 1);  // xi
    CHECK(index_of(info, unit(4, 3)) == 0);  // eta
    CHECK_THROWS_AS(index_of(info, unit(4, 0)), NotInSperp);  // x is in S
}

TEST_CASE("generalized OU: kernel formula of the drift chain") {
    // R = 0, Qm = diag(1,0), B = [[0,0],[1,0]]: S = R^2_x x {0}, k0 = 1
    const ExampleSpec ex = ou_default();
    const SingularSpaceInfo info = singular_space(ex.symbol);
    CHECK(info.dim_S() == 2);
    CHECK(info.k0 == 1);
    RMat expected(4, 2);
    expected.setZero();
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK(subspace_gap(info.S_basis, expected) < 1e-10);

    const StabilityReport st = check_singular_stability(ex.symbol, info);
    CHECK(st.reF_residual <= 1e-10);
    CHECK(st.imF_residual <= 1e-10);

    // indices within the xi-block stratification
    CHECK(index_of(info, unit(4, 2)) == 0);  // xi_1: Qm sees it at once
    CHECK(index_of(info, unit(4, 3)) == 1);  // xi_2: only through B^T

    // positive definite R, Qm with B = 0: S = {0}, k0 = 0
    RMat qm = RMat::Identity(2, 2), r = RMat::Identity(2, 2),
         b = RMat::Zero(2, 2);
    const SingularSpaceInfo trivial = singular_space(ou(qm, r, b).symbol);
    CHECK(trivial.dim_S() == 0);
    CHECK(trivial.k0 == 0);
}

TEST_CASE("V_k chain is nested and stabilizes at k0") {
    for (unsigned seed : {3u, 7u, 20u, 41u}) {
        const QuadraticSymbol q = random_accretive(2, seed);
        const SingularSpaceInfo info = singular_space(q);
        REQUIRE(static_cast<int>(info.Vk_bases.size()) == info.k0 + 1);
        for (int k = 0; k + 1 <= info.k0; ++k)
            CHECK(info.Vk_bases[k].cols() >= info.Vk_bases[k + 1].cols());
        CHECK(info.Vk_bases.back().cols() == info.dim_S());

        // recomputing with the full Cayley-Hamilton range never shrinks S
        const RMat oracle = stacked_singular_space(q);
        CHECK(oracle.cols() == info.dim_S());
        CHECK(subspace_gap(info.S_basis, oracle) < 1e-8);

        // residual bound along the chain
        const HamiltonMap f = hamilton_map(q);
        const double f_norm = spectral_norm(f.F);
        RMat pow = RMat::Identity(4, 4);
        for (int j = 0; j < 4; ++j) {
            for (Eigen::Index c = 0; c < info.S_basis.cols(); ++c) {
                const double res = (f.re * pow * info.S_basis.col(c)).norm();
                CHECK(res <= 10.0 * info.rank_tol *
                                 std::pow(f_norm, j + 1) +
                             1e-14);
            }
            pow = (f.im * pow).eval();
        }
    }
}

TEST_CASE("dimension-ambiguity guard") {
    // singular values of Re F straddle rank_tol with a gap factor < 10
    CMat q = CMat::Zero(4, 4);
    q(0, 0) = 1.0;
    q(1, 1) = 2e-9;
    q(2, 2) = 5e-10;
    q(3, 3) = 1.0;
    const QuadraticSymbol sym = QuadraticSymbol::make(2, q);
    CHECK_THROWS_AS(singular_space(sym, 1e-9), IllConditioned);
    // a looser tolerance resolves the ambiguity
    CHECK_NOTHROW(singular_space(sym, 1e-6));
}
