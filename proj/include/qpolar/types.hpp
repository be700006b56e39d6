#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpolar {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Eigenvalues with multiplicity plus a rough conditioning estimate of the
/// eigenvector basis.
struct Spectrum {
    CVec eigenvalues;
    double condition_estimate = 0.0;
};

struct PredicateResult {
    bool ok = false;
    double residual = 0.0;
    operator bool() const { return ok; }
};

// Error taxonomy. Everything derives from std::runtime_error so callers can
// catch broadly at the CLI boundary.
struct BranchCutViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpectrumViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularShift : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateCosine : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateKappa : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotInSperp : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroVector : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonAccretiveSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qpolar
