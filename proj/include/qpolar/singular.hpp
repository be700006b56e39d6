#pragma once

#include <vector>

#include "qpolar/symbols.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

/// Singular space S = intersection over j of Ker(Re F (Im F)^j) in R^{2n},
/// its stratification V_0 >= V_1 >= ... >= V_{k0} = S and the defining
/// integer k0 (<= 2n-1 by Cayley-Hamilton).
struct SingularSpaceInfo {
    RMat S_basis;      // orthonormal, 2n x dim(S)
    RMat Sperp_basis;  // orthonormal complement
    int k0 = 0;
    std::vector<RMat> Vk_bases;  // V_0 .. V_{k0}
    double rank_tol = 1e-9;

    Eigen::Index dim_S() const { return S_basis.cols(); }
};

struct StabilityReport {
    double reF_residual = 0.0;  // ||Re F * S_basis||
    double imF_residual = 0.0;  // deviation of Im F * S_basis from span(S)
};

/// Computes S by incremental kernel intersection. Throws IllConditioned when
/// a singular-value gap smaller than a factor 10 across rank_tol makes a
/// kernel dimension ambiguous.
SingularSpaceInfo singular_space(const QuadraticSymbol& q,
                                 double rank_tol = 1e-9);

/// Index k_{X0} = min{ k : X0 in V_k^perp } of a direction X0 in S^perp.
/// Throws NotInSperp if the projection of X0 onto S is not negligible and
/// ZeroVector for X0 = 0.
int index_of(const SingularSpaceInfo& info, const RVec& x0);

/// Residuals of (Re F) S = {0} and (Im F) S subset S.
StabilityReport check_singular_stability(const QuadraticSymbol& q,
                                         const SingularSpaceInfo& info);

}  // namespace qpolar
