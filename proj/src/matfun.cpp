#include "qpolar/matfun.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qpolar/quadrature.hpp"

namespace qpolar {

namespace {

void require_square(const CMat& m, const char* who) {
    if (m.rows() != m.cols())
        throw DimensionMismatch(std::string(who) + ": matrix must be square");
    if (!m.allFinite())
        throw InputError(std::string(who) + ": matrix has NaN/Inf entries");
}

/// Distance of z to the half-line (-inf, 0].
double distance_to_cut(Complex z) {
    return z.real() <= 0.0 ? std::abs(z.imag()) : std::abs(z);
}

void guard_principal_branch(const CVec& eigs, double norm, const char* who) {
    const double guard = 1e-12 + 1e-9 * norm;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (distance_to_cut(eigs[i]) < guard)
            throw BranchCutViolation(std::string(who) +
                                     ": eigenvalue too close to (-inf, 0]");
    }
}

/// Principal square root of an upper triangular matrix.
CMat sqrt_triangular(const CMat& t) {
    const Eigen::Index n = t.rows();
    CMat s = CMat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        s(j, j) = std::sqrt(t(j, j));
        for (Eigen::Index i = j - 1; i >= 0; --i) {
            Complex acc = t(i, j);
            for (Eigen::Index k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
            s(i, j) = acc / (s(i, i) + s(j, j));
        }
    }
    return s;
}

/// log(I + x) on matrices with ||x|| <= ~0.3, via the integral
/// representation log(I+x) = int_0^1 x (I + s x)^{-1} ds evaluated with
/// Gauss-Legendre nodes (equivalent to the diagonal Pade approximant).
CMat log1p_small(const CMat& x) {
    static const QuadratureRule rule = gauss_legendre(12);
    const Eigen::Index n = x.rows();
    CMat acc = CMat::Zero(n, n);
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const CMat den = CMat::Identity(n, n) + rule.nodes[i] * x;
        acc += rule.weights[i] * den.partialPivLu().solve(x).eval();
    }
    return acc;
}

}  // namespace

double spectral_norm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

double spectral_norm(const RMat& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

CMat mat_exp(const CMat& m) {
    require_square(m, "mat_exp");
    const Eigen::Index n = m.rows();
    const CMat id = CMat::Identity(n, n);

    // Pade degree selection thresholds (1-norm), Higham 2005.
    const double theta[] = {1.495585217958292e-2, 2.539398330063230e-1,
                            9.504178996162932e-1, 2.097847961257068e0,
                            5.371920351148152e0};
    const int degrees[] = {3, 5, 7, 9, 13};
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();

    int squarings = 0;
    CMat a = m;
    int degree = 13;
    for (int k = 0; k < 5; ++k) {
        if (norm1 <= theta[k]) {
            degree = degrees[k];
            break;
        }
    }
    if (norm1 > theta[4]) {
        squarings = std::max(0, static_cast<int>(
                                    std::ceil(std::log2(norm1 / theta[4]))));
        a /= std::pow(2.0, squarings);
    }

    auto pade = [&](const std::vector<double>& b) {
        const CMat a2 = a * a;
        CMat u, v;
        if (b.size() == 14) {  // degree 13 uses the split evaluation
            const CMat a4 = a2 * a2;
            const CMat a6 = a2 * a4;
            u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                     b[5] * a4 + b[3] * a2 + b[1] * id);
            v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                b[4] * a4 + b[2] * a2 + b[0] * id;
        } else {
            CMat pow = id;
            u = CMat::Zero(n, n);
            v = CMat::Zero(n, n);
            for (size_t k = 0; k + 1 < b.size(); k += 2) {
                v += b[k] * pow;
                u += b[k + 1] * pow;
                pow = (pow * a2).eval();
            }
            if (b.size() % 2 == 1) v += b.back() * pow;
            u = (a * u).eval();
        }
        return std::pair<CMat, CMat>(u, v);
    };

    std::vector<double> b;
    switch (degree) {
        case 3: b = {120, 60, 12, 1}; break;
        case 5: b = {30240, 15120, 3360, 420, 30, 1}; break;
        case 7: b = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
            break;
        case 9:
            b = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                 2162160., 110880., 3960., 90., 1.};
            break;
        default:
            b = {64764752532480000., 32382376266240000., 7771770303897600.,
                 1187353796428800., 129060195264000., 10559470521600.,
                 670442572800., 33522128640., 1323241920., 40840800., 960960.,
                 16380., 182., 1.};
            break;
    }
    auto [u, v] = pade(b);
    CMat r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = (r * r).eval();
    return r;
}

CMat mat_log_principal(const CMat& m) {
    require_square(m, "mat_log_principal");
    Eigen::ComplexSchur<CMat> schur(m);
    if (schur.info() != Eigen::Success)
        throw ConvergenceFailure("mat_log_principal: Schur iteration failed");
    CMat t = schur.matrixT();
    const CMat& u = schur.matrixU();
    guard_principal_branch(t.diagonal(), spectral_norm(m),
                           "mat_log_principal");

    const Eigen::Index n = t.rows();
    const CMat id = CMat::Identity(n, n);
    int halvings = 0;
    while ((t - id).norm() > 0.25) {
        t = sqrt_triangular(t);
        if (++halvings > 80)
            throw ConvergenceFailure(
                "mat_log_principal: square-root scaling did not contract");
    }
    CMat logt = std::pow(2.0, halvings) * log1p_small(t - id);
    return u * logt * u.adjoint();
}

CMat mat_sqrt_principal(const CMat& m) {
    require_square(m, "mat_sqrt_principal");
    Eigen::ComplexSchur<CMat> schur(m);
    if (schur.info() != Eigen::Success)
        throw ConvergenceFailure("mat_sqrt_principal: Schur iteration failed");
    guard_principal_branch(schur.matrixT().diagonal(), spectral_norm(m),
                           "mat_sqrt_principal");
    const CMat s = sqrt_triangular(schur.matrixT());
    return schur.matrixU() * s * schur.matrixU().adjoint();
}

CMat mat_atanh(const CMat& m) {
    require_square(m, "mat_atanh");
    const Eigen::Index n = m.rows();
    const CMat id = CMat::Identity(n, n);
    // atanh branch points are +-1; both I+m and I-m must stay clear of the
    // logarithm cut.
    const Spectrum sp = spectrum(m);
    const double guard_plus = 1e-12 + 1e-9 * spectral_norm(CMat(id + m));
    const double guard_minus = 1e-12 + 1e-9 * spectral_norm(CMat(id - m));
    for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i) {
        const Complex lam = sp.eigenvalues[i];
        if (distance_to_cut(1.0 + lam) < guard_plus ||
            distance_to_cut(1.0 - lam) < guard_minus)
            throw BranchCutViolation(
                "mat_atanh: eigenvalue too close to a branch cut");
    }
    return 0.5 * (mat_log_principal(id + m) - mat_log_principal(id - m));
}

Spectrum spectrum(const CMat& m) {
    require_square(m, "spectrum");
    Eigen::ComplexEigenSolver<CMat> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("spectrum: QR iteration failed");
    Spectrum result;
    result.eigenvalues = solver.eigenvalues();
    const auto sv = solver.eigenvectors().jacobiSvd().singularValues();
    const double smin = sv(sv.size() - 1);
    result.condition_estimate =
        smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    return result;
}

namespace {

template <typename Mat>
Mat kernel_basis_impl(const Mat& m, double rank_tol) {
    if (rank_tol <= 0.0) throw InputError("kernel_basis: rank_tol must be > 0");
    const Eigen::Index n = m.cols();
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = rank_tol * smax;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

}  // namespace

CMat kernel_basis(const CMat& m, double rank_tol) {
    return kernel_basis_impl(m, rank_tol);
}

RMat kernel_basis(const RMat& m, double rank_tol) {
    return kernel_basis_impl(m, rank_tol);
}

namespace {

PredicateResult from_residual(double residual, double tol, double scale) {
    PredicateResult r;
    r.residual = residual;
    r.ok = residual <= tol * std::max(1.0, scale);
    return r;
}

}  // namespace

PredicateResult is_real(const CMat& m, double tol) {
    require_square(m, "is_real");
    return from_residual(spectral_norm(RMat(m.imag())), tol, spectral_norm(m));
}

PredicateResult is_symmetric(const CMat& m, double tol) {
    require_square(m, "is_symmetric");
    return from_residual(spectral_norm(CMat(m - m.transpose())), tol,
                         spectral_norm(m));
}

PredicateResult is_hermitian(const CMat& m, double tol) {
    require_square(m, "is_hermitian");
    return from_residual(spectral_norm(CMat(m - m.adjoint())), tol,
                         spectral_norm(m));
}

PredicateResult is_psd(const CMat& m, double tol) {
    require_square(m, "is_psd");
    const CMat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(h,
                                               Eigen::EigenvaluesOnly);
    const double lambda_min = solver.eigenvalues().minCoeff();
    PredicateResult r;
    r.residual = std::max(0.0, -lambda_min);
    r.ok = lambda_min >= -tol * std::max(1.0, spectral_norm(m));
    return r;
}

PredicateResult is_symplectic(const CMat& m, double tol) {
    require_square(m, "is_symplectic");
    const Eigen::Index dim = m.rows();
    if (dim % 2 != 0)
        throw DimensionMismatch("is_symplectic: odd-dimensional matrix");
    const Eigen::Index n = dim / 2;
    RMat j = RMat::Zero(dim, dim);
    j.topRightCorner(n, n) = RMat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -RMat::Identity(n, n);
    const CMat jc = j.cast<Complex>();
    const double residual =
        spectral_norm(CMat(m.transpose() * jc * m - jc));
    // Residual scales like ||m||^2 in floating point.
    const double scale = spectral_norm(m);
    return from_residual(residual, tol, scale * scale);
}

}  // namespace qpolar
