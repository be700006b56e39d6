#include "qpolar/polar.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpolar/matfun.hpp"
#include "qpolar/quadrature.hpp"

namespace qpolar {

namespace {

constexpr double kSmallTime = 1e-8;
constexpr Complex kI{0.0, 1.0};

CMat flow(const QuadraticSymbol& q, Complex coefficient) {
    const CMat j = standard_J(q.n).cast<Complex>();
    return mat_exp(coefficient * j * q.Q);
}

/// e^{-2itJ conj(Q)} evaluated at time s.
CMat conj_flow(const QuadraticSymbol& q, double s) {
    const CMat j = standard_J(q.n).cast<Complex>();
    return mat_exp(-2.0 * kI * s * j * q.Q.conjugate());
}

RMat symmetrized_real(const CMat& m) {
    const RMat re = m.real();
    return 0.5 * (re + re.transpose());
}

double real_sym_residual(const CMat& m) {
    const double scale = std::max(1.0, spectral_norm(m));
    return std::max(spectral_norm(RMat(m.imag())),
                    spectral_norm(CMat(m - m.transpose()))) /
           scale;
}

}  // namespace

CMat k_matrix(const QuadraticSymbol& q, double t) {
    const CMat k = flow(q, -2.0 * kI * t) * conj_flow(q, t);
    const Spectrum sp = spectrum(k);
    for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i) {
        const Complex lambda = sp.eigenvalues[i];
        if (lambda.real() <= 0.0 ||
            std::abs(lambda.imag()) > 1e-8 * std::abs(lambda))
            throw SpectrumViolation(
                "k_matrix: spectrum is not real positive (broken accretivity "
                "or convention)");
    }
    return k;
}

CMat gamma_matrix(const QuadraticSymbol& q, double t, int nodes) {
    if (nodes < 2) throw InputError("gamma_matrix: need at least 2 nodes");
    const RMat re_q = symmetrized_real(q.Q.real().cast<Complex>());
    const Eigen::Index dim = q.dim();
    CMat acc = CMat::Zero(dim, dim);
    const QuadratureRule rule = gauss_legendre(nodes);
    for (int i = 0; i < nodes; ++i) {
        const CMat e = conj_flow(q, t * rule.nodes[i]);
        acc += rule.weights[i] * (e.adjoint() * re_q.cast<Complex>() * e);
    }
    acc *= t;
    return 0.5 * (acc + acc.adjoint());
}

RMat a_matrix(const QuadraticSymbol& q, double t) {
    if (std::abs(t) < kSmallTime) return symmetrized_real(q.Q);
    const CMat j = standard_J(q.n).cast<Complex>();
    const CMat logk = mat_log_principal(k_matrix(q, t));
    // -(4itJ)^{-1} = -i/(4t) J
    const CMat a = (-kI / (4.0 * t)) * j * logk;
    return symmetrized_real(a);
}

RMat a_matrix_atanh(const QuadraticSymbol& q, double t) {
    if (std::abs(t) < kSmallTime) return symmetrized_real(q.Q);
    const Eigen::Index dim = q.dim();
    const CMat j = standard_J(q.n).cast<Complex>();
    const CMat g = mat_sqrt_principal(k_matrix(q, t));
    const CMat id = CMat::Identity(dim, dim);
    const CMat cayley = (g - id) * (g + id).partialPivLu().inverse();
    // -(itJ)^{-1} = -i/t J
    const CMat a = (-kI / t) * j * mat_atanh(cayley);
    return symmetrized_real(a);
}

RMat m_matrix(const QuadraticSymbol& q, double t) {
    if (std::abs(t) < kSmallTime) return symmetrized_real(q.Q);
    const Eigen::Index dim = q.dim();
    const CMat j = standard_J(q.n).cast<Complex>();
    const CMat g = mat_sqrt_principal(k_matrix(q, t));
    const CMat id = CMat::Identity(dim, dim);
    Eigen::PartialPivLU<CMat> shift(g + id);
    if (std::abs(shift.determinant()) < 1e-12)
        throw SingularShift("m_matrix: -1 is numerically an eigenvalue of G_t");
    const CMat cayley = (g - id) * shift.inverse();
    const CMat m = (-kI / t) * j * cayley;
    return symmetrized_real(m);
}

RMat m_matrix_integral(const QuadraticSymbol& q, double t, int nodes) {
    const RMat re_q = symmetrized_real(q.Q.real().cast<Complex>());
    if (std::abs(t) < kSmallTime) return re_q;
    const Eigen::Index dim = q.dim();
    const CMat g = mat_sqrt_principal(k_matrix(q, t));
    const CMat phi =
        2.0 * (g + CMat::Identity(dim, dim)).partialPivLu().inverse();

    auto integral = [&](int m) {
        const QuadratureRule rule = gauss_legendre(m);
        CMat acc = CMat::Zero(dim, dim);
        for (int i = 0; i < m; ++i) {
            const CMat e = conj_flow(q, t * rule.nodes[i]) * phi;
            acc += rule.weights[i] * (e.adjoint() * re_q.cast<Complex>() * e);
        }
        return acc;
    };

    CMat estimate = integral(nodes);
    for (int m = 2 * nodes; m <= 512; m *= 2) {
        const CMat refined = integral(m);
        const double change = spectral_norm(CMat(refined - estimate)) /
                              std::max(1e-300, spectral_norm(refined));
        estimate = refined;
        if (change < 1e-10) break;
    }
    return symmetrized_real(0.5 * (estimate + estimate.adjoint()));
}

RMat h_matrix(const QuadraticSymbol& q, double t) {
    const CMat j = standard_J(q.n).cast<Complex>();
    const CMat a = a_matrix(q, t).cast<Complex>();
    const CMat h = mat_exp(2.0 * kI * t * j * a) * flow(q, -2.0 * kI * t);
    return h.real();
}

std::optional<RMat> b_matrix(const QuadraticSymbol& q, double t) {
    if (std::abs(t) < kSmallTime) {
        const RMat im = q.Q.imag();
        return RMat(0.5 * (im + im.transpose()));
    }
    const RMat h = h_matrix(q, t);
    const Eigen::Index dim = q.dim();
    const RMat j = standard_J(q.n);
    const double window = spectral_norm(RMat(h - RMat::Identity(dim, dim)));

    CMat logh;
    try {
        logh = mat_log_principal(h.cast<Complex>());
    } catch (const BranchCutViolation&) {
        return std::nullopt;
    }
    // (2tJ)^{-1} = -J/(2t)
    const CMat b_raw = (-1.0 / (2.0 * t)) * j.cast<Complex>() * logh;
    const RMat b = symmetrized_real(b_raw);
    if (window < 1.0) return b;

    // Outside the guaranteed window, keep B_t only when it certifies itself.
    if (real_sym_residual(b_raw) > 1e-8) return std::nullopt;
    const CMat recon = mat_exp(2.0 * t * (j * b).cast<Complex>());
    const double rel = spectral_norm(CMat(recon - h.cast<Complex>())) /
                       std::max(1.0, spectral_norm(h));
    if (rel > 1e-8) return std::nullopt;
    return b;
}

double validity_radius(const QuadraticSymbol& q, double t_max, int steps) {
    if (!(t_max > 0.0)) throw InputError("validity_radius: t_max must be > 0");
    if (steps < 8) throw InputError("validity_radius: need at least 8 steps");
    const Eigen::Index dim = q.dim();
    auto excess = [&](double s) {
        return spectral_norm(RMat(h_matrix(q, s) - RMat::Identity(dim, dim))) -
               1.0;
    };
    double lo = 0.0;
    double hi = -1.0;
    for (int k = 1; k <= steps; ++k) {
        const double s = t_max * k / steps;
        if (excess(s) >= 0.0) {
            hi = s;
            break;
        }
        lo = s;
    }
    if (hi < 0.0) return t_max;
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) >= 0.0 ? hi : lo) = mid;
    }
    return lo;
}

PolarFactors polar_factors(const QuadraticSymbol& q, double t) {
    PolarFactors f;
    f.t = t;
    const Eigen::Index dim = q.dim();
    const CMat id = CMat::Identity(dim, dim);
    const CMat j = standard_J(q.n).cast<Complex>();

    if (std::abs(t) < kSmallTime) {
        f.K = id;
        f.G = id;
        f.A = symmetrized_real(q.Q);
        f.M = f.A;
        f.H = RMat::Identity(dim, dim);
        f.B = RMat(q.Q.imag());
        f.within_validity = true;
        f.residuals["factorization"] = 0.0;
        f.residuals["symplectic"] = 0.0;
        f.residuals["psd_gap"] = 0.0;
        f.residuals["tan_identity"] = 0.0;
        f.residuals["integral_rep"] = 0.0;
        return f;
    }

    f.K = k_matrix(q, t);
    f.G = mat_sqrt_principal(f.K);

    const CMat logk = mat_log_principal(f.K);
    const CMat a_raw = (-kI / (4.0 * t)) * j * logk;
    f.A = symmetrized_real(a_raw);
    f.residuals["a_real_sym"] = real_sym_residual(a_raw);

    Eigen::PartialPivLU<CMat> shift(f.G + id);
    const CMat m_raw = (-kI / t) * j * (f.G - id) * shift.inverse();
    f.M = symmetrized_real(m_raw);
    f.residuals["m_real_sym"] = real_sym_residual(m_raw);

    const CMat flow_q = flow(q, -2.0 * kI * t);
    const CMat h_raw = mat_exp(2.0 * kI * t * j * f.A.cast<Complex>()) * flow_q;
    f.H = h_raw.real();
    f.residuals["h_real"] =
        spectral_norm(RMat(h_raw.imag())) / std::max(1.0, spectral_norm(h_raw));
    f.within_validity =
        spectral_norm(RMat(f.H - RMat::Identity(dim, dim))) < 1.0;
    f.B = b_matrix(q, t);

    // Residuals of the Section-style identities.
    const double flow_norm = spectral_norm(flow_q);
    if (f.B) {
        const CMat lhs = mat_exp(-2.0 * kI * t * j * f.A.cast<Complex>()) *
                         mat_exp(2.0 * t * (j * f.B->cast<Complex>()));
        f.residuals["factorization"] =
            spectral_norm(CMat(lhs - flow_q)) / flow_norm;
    }
    f.residuals["symplectic"] =
        std::max(is_symplectic(f.G).residual,
                 is_symplectic(f.H.cast<Complex>()).residual);

    Eigen::SelfAdjointEigenSolver<RMat> gap(RMat(f.A - f.M),
                                            Eigen::EigenvaluesOnly);
    f.residuals["psd_gap"] =
        std::max(0.0, -gap.eigenvalues().minCoeff()) /
        std::max(1.0, spectral_norm(f.A));

    // tan(tJA_t) = tJ M_t.
    const CMat e_plus = mat_exp(kI * t * j * f.A.cast<Complex>());
    const CMat e_minus = mat_exp(-kI * t * j * f.A.cast<Complex>());
    const CMat tan_m = -kI * (e_plus - e_minus) *
                       (e_plus + e_minus).partialPivLu().inverse();
    const CMat rhs = t * j * f.M.cast<Complex>();
    f.residuals["tan_identity"] =
        spectral_norm(CMat(tan_m - rhs)) / std::max(1.0, spectral_norm(rhs));

    const RMat m_int = m_matrix_integral(q, t);
    f.residuals["integral_rep"] =
        spectral_norm(RMat(m_int - f.M)) / std::max(1.0, spectral_norm(f.M));

    f.residuals["k_vs_exp_a"] =
        spectral_norm(CMat(mat_exp(-4.0 * kI * t * j * f.A.cast<Complex>()) -
                           f.K)) /
        spectral_norm(f.K);
    return f;
}

MehlerSymbol mehler_symbol(const QuadraticSymbol& q, double t) {
    MehlerSymbol sym;
    sym.t = t;
    sym.M = m_matrix(q, t);
    if (std::abs(t) < kSmallTime) {
        sym.prefactor = 1.0;
        return sym;
    }
    const CMat j = standard_J(q.n).cast<Complex>();
    const CMat arg = t * j * a_matrix(q, t).cast<Complex>();
    const CMat cos_m = 0.5 * (mat_exp(kI * arg) + mat_exp(-kI * arg));
    const Complex det = cos_m.determinant();
    if (std::abs(det) < 1e-12)
        throw DegenerateCosine("mehler_symbol: det cos(tJA_t) is ~0");
    if (det.real() <= 0.0 || std::abs(det.imag()) > 1e-8 * std::abs(det))
        throw DegenerateCosine(
            "mehler_symbol: det cos(tJA_t) is not real positive");
    sym.prefactor = 1.0 / std::sqrt(det.real());
    return sym;
}

double harmonic_split_check(double t) {
    const CMat j = standard_J(1).cast<Complex>();
    CMat qx = CMat::Zero(2, 2);
    qx(0, 0) = 1.0;
    CMat qxi = CMat::Zero(2, 2);
    qxi(1, 1) = 1.0;
    const CMat left = mat_exp(-kI * std::tanh(t) * j * qx);
    const CMat mid = mat_exp(-kI * std::sinh(2.0 * t) * j * qxi);
    const CMat rot = mat_exp(-2.0 * kI * t * j);
    return spectral_norm(CMat(left * mid * left - rot));
}

}  // namespace qpolar
