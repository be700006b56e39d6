#pragma once

#include <vector>

#include "qpolar/types.hpp"

namespace qpolar {

struct SingularSpaceInfo;  // singular.hpp

/// Complex-valued quadratic form q(X) = <QX, X> on phase space R^{2n},
/// coordinates ordered (x_1..x_n, xi_1..xi_n). Q is complex symmetric and
/// Re Q is positive semidefinite (accretivity); construction validates both
/// and projects tiny negative Re-eigenvalues to zero.
struct QuadraticSymbol {
    int n = 0;
    CMat Q;

    static QuadraticSymbol make(int n, const CMat& q);

    Eigen::Index dim() const { return 2 * static_cast<Eigen::Index>(n); }
    RMat re() const { return Q.real(); }
    RMat im() const { return Q.imag(); }

    /// q(X) = X^T Q conj(X) for complex X, which equals q(Re X) + q(Im X).
    Complex operator()(const CVec& x) const;
};

struct HamiltonMap {
    CMat F;
    RMat re;
    RMat im;
};

/// The standard symplectic matrix [[0, I], [-I, 0]].
RMat standard_J(int n);

/// sigma(X, Y) = <xi, y> - <x, eta> with the bilinear (not sesquilinear)
/// pairing.
Complex symplectic_form(const CVec& x, const CVec& y);

/// F = JQ, split into real and imaginary parts.
HamiltonMap hamilton_map(const QuadraticSymbol& q);

/// Canonical Poisson bracket {q1, q2}; its Hamilton map is -2[F1, F2].
QuadraticSymbol poisson_bracket(const QuadraticSymbol& q1,
                                const QuadraticSymbol& q2);

/// Matrix of kappa_t(X) = sum_{k=0}^{k0} t^{2k} Re q((Im F)^k X);
/// real symmetric PSD, vanishing exactly on the singular space.
RMat kappa_matrix(const QuadraticSymbol& q, int k0, double t);
RMat kappa_matrix(const QuadraticSymbol& q, const SingularSpaceInfo& info,
                  double t);

/// kappa with the exponent weights capped at 2*k_cap, i.e.
/// sum t^{2 min(k, k_cap)} Re q((Im F)^k X). With k_cap = k0 - 1 this is the
/// adversarial form whose best constant against a_t collapses like t^2.
RMat kappa_matrix_capped(const QuadraticSymbol& q, int k0, double t,
                         int k_cap);

/// Matrix of p_k(X) = sum_{j=0}^{k} w_j Re q((Im F)^j X). Unit weights by
/// default; pass weights to match other conventions (the generalized
/// Ornstein-Uhlenbeck weight operators use w_j = 2^j).
RMat pk_matrix(const QuadraticSymbol& q, int k, int k0,
               const std::vector<double>& weights = {});
RMat pk_matrix(const QuadraticSymbol& q, int k, const SingularSpaceInfo& info,
               const std::vector<double>& weights = {});

}  // namespace qpolar
