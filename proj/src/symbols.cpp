#include "qpolar/symbols.hpp"

#include <Eigen/Eigenvalues>

#include "qpolar/matfun.hpp"
#include "qpolar/singular.hpp"

namespace qpolar {

QuadraticSymbol QuadraticSymbol::make(int n, const CMat& q) {
    if (n < 1) throw InputError("QuadraticSymbol: n must be >= 1");
    if (q.rows() != 2 * n || q.cols() != 2 * n)
        throw DimensionMismatch("QuadraticSymbol: Q must be 2n x 2n");
    if (!q.allFinite())
        throw InputError("QuadraticSymbol: Q has NaN/Inf entries");
    const double norm = spectral_norm(q);
    const double sym_residual = spectral_norm(CMat(q - q.transpose()));
    if (sym_residual > 1e-12 * std::max(1.0, norm))
        throw InputError("QuadraticSymbol: Q is not symmetric");

    QuadraticSymbol sym;
    sym.n = n;
    sym.Q = 0.5 * (q + q.transpose());

    // Accretivity: Re Q must be PSD up to roundoff; small negative
    // eigenvalues are projected away, genuine ones are rejected.
    RMat re = sym.Q.real();
    re = 0.5 * (re + re.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RMat> es(re);
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min < -1e-10 * std::max(1.0, norm))
        throw NonAccretiveSymbol("QuadraticSymbol: Re Q has a negative eigenvalue");
    if (lambda_min < 0.0) {
        RVec clipped = es.eigenvalues().cwiseMax(0.0);
        re = es.eigenvectors() * clipped.asDiagonal() *
             es.eigenvectors().transpose();
        sym.Q.real() = 0.5 * (re + re.transpose());
    }
    return sym;
}

Complex QuadraticSymbol::operator()(const CVec& x) const {
    return (x.transpose() * Q * x.conjugate())(0);
}

RMat standard_J(int n) {
    if (n < 1) throw InputError("standard_J: n must be >= 1");
    RMat j = RMat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = RMat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -RMat::Identity(n, n);
    return j;
}

Complex symplectic_form(const CVec& x, const CVec& y) {
    const Eigen::Index dim = x.size();
    if (dim != y.size() || dim % 2 != 0)
        throw DimensionMismatch("symplectic_form: bad dimensions");
    const Eigen::Index n = dim / 2;
    Complex acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        acc += x[n + k] * y[k] - x[k] * y[n + k];
    return acc;
}

HamiltonMap hamilton_map(const QuadraticSymbol& q) {
    const RMat j = standard_J(q.n);
    HamiltonMap h;
    h.F = j.cast<Complex>() * q.Q;
    h.re = j * q.re();
    h.im = j * q.im();
    return h;
}

QuadraticSymbol poisson_bracket(const QuadraticSymbol& q1,
                                const QuadraticSymbol& q2) {
    if (q1.n != q2.n)
        throw DimensionMismatch("poisson_bracket: dimension mismatch");
    const CMat j = standard_J(q1.n).cast<Complex>();
    // {q1,q2}(X) = -4 X^T Q1 J Q2 X, symmetrized.
    const CMat a = q1.Q * j * q2.Q;
    const CMat bracket = -2.0 * (a + a.transpose().eval());
    QuadraticSymbol out;
    out.n = q1.n;
    out.Q = bracket;  // bypass accretivity: brackets need not be accretive
    return out;
}

namespace {

RMat kappa_weighted(const QuadraticSymbol& q, int k0,
                    const std::vector<double>& coeff) {
    const RMat re_q = 0.5 * (q.re() + q.re().transpose());
    const RMat im_f = standard_J(q.n) * q.im();
    RMat acc = RMat::Zero(q.dim(), q.dim());
    RMat powk = RMat::Identity(q.dim(), q.dim());
    for (int k = 0; k <= k0; ++k) {
        acc += coeff[k] * (powk.transpose() * re_q * powk);
        if (k < k0) powk = (im_f * powk).eval();
    }
    return 0.5 * (acc + acc.transpose());
}

}  // namespace

RMat kappa_matrix(const QuadraticSymbol& q, int k0, double t) {
    if (k0 < 0) throw InputError("kappa_matrix: k0 must be >= 0");
    std::vector<double> coeff(k0 + 1);
    for (int k = 0; k <= k0; ++k) coeff[k] = std::pow(t, 2 * k);
    return kappa_weighted(q, k0, coeff);
}

RMat kappa_matrix(const QuadraticSymbol& q, const SingularSpaceInfo& info,
                  double t) {
    return kappa_matrix(q, info.k0, t);
}

RMat kappa_matrix_capped(const QuadraticSymbol& q, int k0, double t,
                         int k_cap) {
    if (k_cap < 0 || k_cap > k0)
        throw InputError("kappa_matrix_capped: need 0 <= k_cap <= k0");
    std::vector<double> coeff(k0 + 1);
    for (int k = 0; k <= k0; ++k)
        coeff[k] = std::pow(t, 2 * std::min(k, k_cap));
    return kappa_weighted(q, k0, coeff);
}

RMat pk_matrix(const QuadraticSymbol& q, int k, int k0,
               const std::vector<double>& weights) {
    if (k < 0 || k > k0) throw InputError("pk_matrix: need 0 <= k <= k0");
    std::vector<double> coeff(k + 1, 1.0);
    if (!weights.empty()) {
        if (static_cast<int>(weights.size()) < k + 1)
            throw InputError("pk_matrix: weight vector too short");
        for (int j = 0; j <= k; ++j) coeff[j] = weights[j];
    }
    return kappa_weighted(q, k, coeff);
}

RMat pk_matrix(const QuadraticSymbol& q, int k, const SingularSpaceInfo& info,
               const std::vector<double>& weights) {
    return pk_matrix(q, k, info.k0, weights);
}

}  // namespace qpolar
