#include <doctest.h>

#include <random>

#include "qpolar/catalog.hpp"
#include "qpolar/matfun.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/symbols.hpp"

using namespace qpolar;

namespace {

CMat random_complex(int n, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * Complex(u(rng), u(rng));
    return m;
}

CMat random_complex_symmetric(int n, unsigned seed, double scale = 1.0) {
    CMat m = random_complex(n, seed, scale);
    return 0.5 * (m + m.transpose()).eval();
}

double rel_err(const CMat& a, const CMat& b) {
    return spectral_norm(CMat(a - b)) / std::max(1e-300, spectral_norm(b));
}

// Brute-force exponential: plain Taylor sum, the independent oracle for
// mat_exp on small-norm matrices.
CMat exp_taylor(const CMat& m, int terms = 60) {
    CMat acc = CMat::Identity(m.rows(), m.cols());
    CMat pow = acc;
    for (int k = 1; k <= terms; ++k) {
        pow = (pow * m / static_cast<double>(k)).eval();
        acc += pow;
    }
    return acc;
}

}  // namespace

TEST_CASE("mat_exp basic values") {
    CHECK(rel_err(mat_exp(CMat::Zero(2, 2)), CMat::Identity(2, 2)) == 0.0);

    CMat nilpotent = CMat::Zero(2, 2);
    nilpotent(0, 1) = 1.0;
    CMat expected = CMat::Identity(2, 2);
    expected(0, 1) = 1.0;
    CHECK(spectral_norm(CMat(mat_exp(nilpotent) - expected)) < 1e-15);
}

TEST_CASE("mat_exp matches the Taylor oracle") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        const CMat m = random_complex(5, seed, 0.4);
        CHECK(rel_err(mat_exp(m), exp_taylor(m)) < 1e-14);
    }
    // larger norm through the squaring phase
    const CMat m = random_complex(4, 9, 3.0);
    CHECK(rel_err(mat_exp(m), exp_taylor(CMat(m / 8.0), 80) * exp_taylor(CMat(m / 8.0), 80) *
                                  exp_taylor(CMat(m / 4.0), 80) *
                                  exp_taylor(CMat(m / 2.0), 80)) < 1e-12);
}

TEST_CASE("exp(JQ) is symplectic for symmetric Q") {
    for (unsigned seed : {11u, 12u, 13u}) {
        const CMat q = random_complex_symmetric(4, seed);
        const CMat j = standard_J(2).cast<Complex>();
        CHECK(is_symplectic(mat_exp(CMat(j * q)), 1e-12).ok);
    }
}

TEST_CASE("mat_log_principal basic values") {
    CHECK(spectral_norm(mat_log_principal(CMat::Identity(3, 3))) < 1e-14);

    CMat d = CMat::Zero(2, 2);
    d(0, 0) = std::exp(1.0);
    d(1, 1) = std::exp(2.0);
    CMat expected = CMat::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 2.0;
    CHECK(rel_err(mat_log_principal(d), expected) < 1e-14);
}

TEST_CASE("log(exp(N)) = N round trip") {
    for (unsigned seed : {21u, 22u, 23u, 24u, 25u}) {
        CMat n = random_complex(4, seed);
        n *= 0.5 / spectral_norm(n);
        CHECK(rel_err(mat_log_principal(mat_exp(n)), n) < 1e-10);
    }
}

TEST_CASE("exp(log(M)) = M on positive-spectrum matrices") {
    for (unsigned seed : {31u, 32u, 33u}) {
        const CMat l = random_complex(4, seed);
        const CMat m = l * l.adjoint() + 0.5 * CMat::Identity(4, 4);
        CHECK(rel_err(mat_exp(mat_log_principal(m)), m) < 1e-9);
        // eigenvalues of the log stay in the principal strip
        const Spectrum sp = spectrum(mat_log_principal(m));
        for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
            CHECK(std::abs(sp.eigenvalues[i].imag()) < M_PI);
    }
}

TEST_CASE("log branch guard") {
    CMat bad = CMat::Identity(2, 2);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(mat_log_principal(bad), BranchCutViolation);
    bad(0, 0) = 1e-15;  // inside the absolute guard distance
    CHECK_THROWS_AS(mat_log_principal(bad), BranchCutViolation);
    CHECK_THROWS_AS(mat_sqrt_principal(CMat(-CMat::Identity(2, 2))),
                    BranchCutViolation);
}

TEST_CASE("mat_sqrt_principal basic values") {
    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    CMat expected = CMat::Zero(2, 2);
    expected(0, 0) = 2.0;
    expected(1, 1) = 3.0;
    CHECK(rel_err(mat_sqrt_principal(d), expected) < 1e-14);
    CHECK(rel_err(mat_sqrt_principal(CMat::Identity(3, 3)),
                  CMat::Identity(3, 3)) < 1e-14);
}

TEST_CASE("sqrt squaring oracle on K_t") {
    const QuadraticSymbol q = random_accretive(2, 77);
    const CMat k = k_matrix(q, 0.3);
    const CMat g = mat_sqrt_principal(k);
    CHECK(rel_err(CMat(g * g), k) < 1e-10);
    // right half-plane spectrum
    const Spectrum sp = spectrum(g);
    for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
        CHECK(sp.eigenvalues[i].real() > 0.0);
}

TEST_CASE("sqrt commutes with inversion") {
    for (unsigned seed : {41u, 42u}) {
        const CMat l = random_complex(4, seed);
        const CMat m = l * l.adjoint() + CMat::Identity(4, 4);
        const CMat lhs = mat_sqrt_principal(CMat(m.inverse())) *
                         mat_sqrt_principal(m);
        CHECK(spectral_norm(CMat(lhs - CMat::Identity(4, 4))) < 1e-9);
    }
}

TEST_CASE("mat_atanh values and route agreement") {
    CHECK(spectral_norm(mat_atanh(CMat::Zero(2, 2))) < 1e-15);

    CMat half = 0.5 * CMat::Identity(2, 2);
    CHECK(std::abs(mat_atanh(half)(0, 0) - Complex(0.54930614433405484, 0.0)) <
          1e-13);

    // atanh route vs Log route for A_t
    const QuadraticSymbol q = random_accretive(2, 5);
    const double t = 0.25;
    const RMat a_log = a_matrix(q, t);
    const RMat a_atanh = a_matrix_atanh(q, t);
    CHECK(spectral_norm(RMat(a_log - a_atanh)) /
              std::max(1.0, spectral_norm(a_log)) <
          1e-9);

    CMat at_branch = CMat::Identity(2, 2);
    CHECK_THROWS_AS(mat_atanh(at_branch), BranchCutViolation);
}

TEST_CASE("spectrum") {
    const CMat j = standard_J(1).cast<Complex>();
    const Spectrum sp = spectrum(j);
    std::vector<double> imag = {sp.eigenvalues[0].imag(),
                                sp.eigenvalues[1].imag()};
    std::sort(imag.begin(), imag.end());
    CHECK(imag[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(imag[1] == doctest::Approx(1.0).epsilon(1e-14));

    // JA has purely imaginary spectrum for Hermitian PSD A
    for (unsigned seed : {51u, 52u, 53u}) {
        const CMat l = random_complex(3, seed);
        CMat a = CMat::Zero(6, 6);
        a.topLeftCorner(3, 3) = l * l.adjoint();
        a.bottomRightCorner(3, 3) = 0.3 * CMat::Identity(3, 3);
        const CMat ja = standard_J(3).cast<Complex>() * a;
        const Spectrum s = spectrum(ja);
        for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
            CHECK(std::abs(s.eigenvalues[i].real()) <=
                  1e-10 * spectral_norm(a));
    }

    // K_t spectrum is real positive for accretive symbols
    const QuadraticSymbol q = random_accretive(3, 8);
    const Spectrum sk = spectrum(k_matrix(q, 0.2));
    for (Eigen::Index i = 0; i < sk.eigenvalues.size(); ++i) {
        CHECK(sk.eigenvalues[i].real() > 0.0);
        CHECK(std::abs(sk.eigenvalues[i].imag()) <=
              1e-8 * std::abs(sk.eigenvalues[i]));
    }
}

TEST_CASE("kernel_basis") {
    CHECK(kernel_basis(CMat(CMat::Zero(2, 2))).cols() == 2);
    CHECK(kernel_basis(CMat(CMat::Identity(3, 3))).cols() == 0);

    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-14;
    const CMat basis = kernel_basis(d, 1e-9);
    REQUIRE(basis.cols() == 1);
    CHECK(std::abs(std::abs(basis(1, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(basis(0, 0)) < 1e-12);
    // columns orthonormal, residual below rank_tol * ||M||
    CHECK(spectral_norm(CMat(d * basis)) <= 1e-9 * spectral_norm(d));
}

TEST_CASE("predicates") {
    const CMat j = standard_J(1).cast<Complex>();
    const PredicateResult sj = is_symplectic(j, 1e-14);
    CHECK(sj.ok);
    CHECK(sj.residual == 0.0);

    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 1.0;
    CHECK(is_psd(d, 1e-12).ok);
    d(1, 1) = -1e-3;
    CHECK_FALSE(is_psd(d, 1e-12).ok);

    const QuadraticSymbol q = random_accretive(2, 99);
    const CMat g = mat_sqrt_principal(k_matrix(q, 0.2));
    CHECK(is_symplectic(g, 1e-10).ok);

    CHECK(is_real(CMat::Identity(2, 2)).ok);
    CHECK_FALSE(is_real(j * Complex(0, 1)).ok);
    CHECK(is_hermitian(CMat(j * Complex(0, 1))).ok);
    CHECK_FALSE(is_symmetric(j, 1e-12).ok);
}
