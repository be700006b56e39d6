#pragma once

#include <map>
#include <optional>
#include <string>

#include "qpolar/symbols.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

/// All time-dependent factors of the splitting
///   e^{-2itJQ} = e^{-2itJA_t} H_t,   H_t = e^{2tJB_t} for small t,
/// together with the residuals of the identities they are supposed to
/// satisfy. A_t, M_t, H_t, B_t are real in exact arithmetic and returned
/// realified; the discarded imaginary/asymmetric parts are recorded in the
/// residual map.
struct PolarFactors {
    double t = 0.0;
    CMat K;  // e^{-2itJQ} e^{-2itJ conj(Q)}
    CMat G;  // principal sqrt of K
    RMat A;  // selfadjoint-part matrix, real symmetric PSD
    RMat M;  // Mehler-form matrix, A >= M >= 0
    RMat H;  // unitary-part flow, real symplectic
    std::optional<RMat> B;
    bool within_validity = false;  // ||H - I|| < 1
    std::map<std::string, double> residuals;
};

struct MehlerSymbol {
    double prefactor = 1.0;  // det(cos(tJA_t))^{-1/2}
    RMat M;                  // = M_t
    double t = 0.0;
};

/// K_t = e^{-2itJQ} e^{-2itJ conj(Q)}. Its spectrum is real positive for
/// accretive symbols; SpectrumViolation otherwise (a convention bug signal).
CMat k_matrix(const QuadraticSymbol& q, double t);

/// Gamma_t = int_0^t (e^{-2isJ conj(Q)})^* (Re Q) (e^{-2isJ conj(Q)}) ds by
/// Gauss-Legendre quadrature; satisfies K_t = I - 4iJ Gamma_t.
CMat gamma_matrix(const QuadraticSymbol& q, double t, int nodes = 64);

/// A_t = -(4itJ)^{-1} Log K_t, with the analytic limit Re Q at t = 0.
RMat a_matrix(const QuadraticSymbol& q, double t);

/// Same A_t through the atanh route -(itJ)^{-1} atanh((G-I)(G+I)^{-1}).
RMat a_matrix_atanh(const QuadraticSymbol& q, double t);

/// M_t = -(itJ)^{-1} (G_t - I)(G_t + I)^{-1}, limit Re Q at t = 0.
RMat m_matrix(const QuadraticSymbol& q, double t);

/// M_t through the integral representation
/// int_0^1 (e^{-2i a tJ conj(Q)} Phi_t)^* (Re Q)(e^{-2i a tJ conj(Q)} Phi_t) da
/// with Phi_t = 2(G_t + I)^{-1}; adaptive Gauss-Legendre starting at `nodes`.
RMat m_matrix_integral(const QuadraticSymbol& q, double t, int nodes = 64);

/// H_t = e^{2itJA_t} e^{-2itJQ}, real symplectic.
RMat h_matrix(const QuadraticSymbol& q, double t);

/// B_t = (2tJ)^{-1} Log H_t when the logarithm makes sense (limit Im Q at
/// t = 0). Inside ||H_t - I|| < 1 this always holds; outside, B_t is still
/// returned when it self-certifies (real symmetric and e^{2tJB_t} = H_t to
/// 1e-8), otherwise absent. Absence is a value, not an error.
std::optional<RMat> b_matrix(const QuadraticSymbol& q, double t);

/// Largest t <= t_max with ||H_s - I|| < 1 on all sampled s <= t, refined by
/// bisection to 1e-6 relative precision.
double validity_radius(const QuadraticSymbol& q, double t_max, int steps = 32);

PolarFactors polar_factors(const QuadraticSymbol& q, double t);

MehlerSymbol mehler_symbol(const QuadraticSymbol& q, double t);

/// Residual of the harmonic-oscillator splitting identity
/// e^{-i tanh(t) JQx} e^{-i sinh(2t) JQxi} e^{-i tanh(t) JQx} = e^{-2itJ}
/// (n = 1, Qx = diag(1,0), Qxi = diag(0,1)).
double harmonic_split_check(double t);

}  // namespace qpolar
