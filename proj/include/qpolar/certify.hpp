#pragma once

#include <optional>
#include <vector>

#include "qpolar/singular.hpp"
#include "qpolar/symbols.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

struct SlopeFit {
    double slope = 0.0;
    double half_width = 0.0;  // ~95% confidence half-width of the slope
    double rms_residual = 0.0;
};

struct DirectionBound {
    RVec x0;
    int index = 0;
    double sup_kappa = 0.0;  // sup <X0,X>^2 / kappa_t(X) over range(kappa)
    double sup_a = 0.0;      // same with a_t in the denominator
    double slope_kappa = 0.0;  // fitted log-log slope, expected -2*index
    double slope_a = 0.0;
};

struct BoundCertificate {
    std::vector<double> t_grid;
    std::vector<double> c_values;
    double c_min_observed = 0.0;
    int k0 = 0;
    SlopeFit coercivity;
    std::vector<DirectionBound> direction_results;
    bool pass = false;
    bool decay_suspected = false;  // small-t heuristic tripped
};

/// Ordinary least squares of y against x, with half-width 2*SE(slope).
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Largest c with A - c*K PSD on range(K): the minimal eigenvalue of the
/// pencil projected onto the eigenvectors of K above rank_tol * ||K||.
/// Throws DegenerateKappa when K vanishes.
double pencil_min_eigenvalue(const RMat& a, const RMat& k,
                             double rank_tol = 1e-9);

/// Full ascending spectrum of the reduced pencil.
RVec pencil_eigenvalues(const RMat& a, const RMat& k, double rank_tol = 1e-9);

/// Best constant in a_t >= c * kappa_t over range(kappa_t).
double best_constant(const QuadraticSymbol& q, const SingularSpaceInfo& info,
                     double t, double rank_tol = 1e-9);

/// Best constant against the weight-capped kappa (sharpness probe: with
/// k_cap = k0 - 1 the constant collapses like t^2).
double best_constant_capped(const QuadraticSymbol& q,
                            const SingularSpaceInfo& info, double t, int k_cap,
                            double rank_tol = 1e-9);

/// Sweeps c(t) over the grid; PASS iff all c(t) > 0 and the three smallest-t
/// values do not decay toward zero faster than 10% per halving of t.
/// Directions, when supplied, are bound-checked at the largest grid point.
BoundCertificate certify_lower_bound(const QuadraticSymbol& q,
                                     const SingularSpaceInfo& info,
                                     const std::vector<double>& t_grid,
                                     const std::vector<RVec>& directions = {},
                                     double rank_tol = 1e-9,
                                     std::optional<int> k_cap = std::nullopt);

/// Fitted slope of log eigmin(kappa_t on S^perp) against log t over the
/// grid; expected ~ 2*k0.
SlopeFit coercivity_exponent(const QuadraticSymbol& q,
                             const SingularSpaceInfo& info,
                             const std::vector<double>& t_grid);

DirectionBound direction_bound(const QuadraticSymbol& q,
                               const SingularSpaceInfo& info, double t,
                               const RVec& x0, double rank_tol = 1e-9);

struct SmoothingRow {
    RVec x0;
    int index = 0;
};

struct SmoothingTable {
    std::vector<SmoothingRow> rows;
    double total_exponent = 0.0;  // sum of indices + m/2
};

/// Predicted smoothing blow-up exponents for a list of phase-space
/// directions (prediction only; no operator-norm verification).
SmoothingTable smoothing_exponents(const QuadraticSymbol& q,
                                   const SingularSpaceInfo& info,
                                   const std::vector<RVec>& directions);

struct SubellipticRow {
    int k = 0;
    RMat pk;
    double exponent = 0.0;  // 2/(2k+1)
};

std::vector<SubellipticRow> subelliptic_report(const QuadraticSymbol& q,
                                               const SingularSpaceInfo& info);

}  // namespace qpolar
