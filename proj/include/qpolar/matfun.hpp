#pragma once

#include "qpolar/types.hpp"

namespace qpolar {

/// Spectral (operator 2-) norm.
double spectral_norm(const CMat& m);
double spectral_norm(const RMat& m);

/// Matrix exponential by Pade-13 scaling and squaring.
CMat mat_exp(const CMat& m);

/// Principal matrix logarithm. The spectrum must stay clear of (-inf, 0]:
/// an eigenvalue within 1e-12 + 1e-9*||m|| of the cut throws
/// BranchCutViolation. Computed on the complex Schur factor by inverse
/// scaling and squaring.
CMat mat_log_principal(const CMat& m);

/// Principal matrix square root (same branch guard as the logarithm),
/// computed by the triangular recurrence on the Schur factor.
CMat mat_sqrt_principal(const CMat& m);

/// Matrix atanh via 1/2 (log(I+m) - log(I-m)). The spectrum must avoid the
/// branch points +-1 and the cuts (-inf,-1], [1,+inf).
CMat mat_atanh(const CMat& m);

/// Dense eigenvalues (QR iteration) with an eigenvector-basis condition
/// estimate. Throws ConvergenceFailure if the iteration fails.
Spectrum spectrum(const CMat& m);

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular values are <= rank_tol * sigma_max. May have zero columns.
CMat kernel_basis(const CMat& m, double rank_tol = 1e-9);
RMat kernel_basis(const RMat& m, double rank_tol = 1e-9);

// Structural predicates. The boolean compares the absolute residual against
// tol * max(1, ||m||); the residual itself is always reported.
PredicateResult is_real(const CMat& m, double tol = 1e-12);
PredicateResult is_symmetric(const CMat& m, double tol = 1e-12);
PredicateResult is_hermitian(const CMat& m, double tol = 1e-12);
/// min eigenvalue of the Hermitian part must be >= -tol * ||m||.
PredicateResult is_psd(const CMat& m, double tol = 1e-12);
/// residual = ||m^T J m - J||.
PredicateResult is_symplectic(const CMat& m, double tol = 1e-12);

}  // namespace qpolar
