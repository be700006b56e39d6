#include "qpolar/singular.hpp"

#include <Eigen/SVD>

#include "qpolar/matfun.hpp"

namespace qpolar {

namespace {

/// Kernel of constraint * basis, expressed in the ambient coordinates.
/// Singular values are thresholded against rank_tol * ||constraint||; a
/// cluster within a factor 10 of the threshold is ambiguous.
RMat intersect_with_kernel(const RMat& constraint, const RMat& basis,
                           double rank_tol) {
    if (basis.cols() == 0) return basis;
    const RMat a = constraint * basis;
    Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = spectral_norm(constraint);
    const double threshold = rank_tol * scale;

    Eigen::Index rank = 0;
    double smallest_kept = std::numeric_limits<double>::infinity();
    double largest_dropped = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) {
            ++rank;
            smallest_kept = std::min(smallest_kept, sv(i));
        } else {
            largest_dropped = std::max(largest_dropped, sv(i));
        }
    }
    if (rank > 0 && largest_dropped > 0.0 &&
        smallest_kept / largest_dropped < 10.0)
        throw IllConditioned(
            "singular_space: kernel dimension ambiguous near rank_tol");
    return basis * svd.matrixV().rightCols(basis.cols() - rank);
}

RMat orthonormal_complement(const RMat& basis, Eigen::Index dim,
                            double rank_tol) {
    if (basis.cols() == 0) return RMat::Identity(dim, dim);
    if (basis.cols() == dim) return RMat(dim, 0);
    return kernel_basis(RMat(basis.transpose()), rank_tol);
}

}  // namespace

SingularSpaceInfo singular_space(const QuadraticSymbol& q, double rank_tol) {
    if (rank_tol <= 0.0)
        throw InputError("singular_space: rank_tol must be > 0");
    const HamiltonMap f = hamilton_map(q);
    const Eigen::Index dim = q.dim();

    std::vector<RMat> chain;
    RMat w = RMat::Identity(dim, dim);
    RMat im_pow = RMat::Identity(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const RMat constraint = f.re * im_pow;
        w = intersect_with_kernel(constraint, w, rank_tol);
        chain.push_back(w);
        im_pow = (f.im * im_pow).eval();
    }

    SingularSpaceInfo info;
    info.rank_tol = rank_tol;
    info.S_basis = chain.back();
    const Eigen::Index dim_s = info.S_basis.cols();
    info.k0 = 0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (chain[j].cols() == dim_s) {
            info.k0 = static_cast<int>(j);
            break;
        }
    }
    info.Vk_bases.assign(chain.begin(), chain.begin() + info.k0 + 1);
    info.Sperp_basis = orthonormal_complement(info.S_basis, dim, rank_tol);
    return info;
}

int index_of(const SingularSpaceInfo& info, const RVec& x0) {
    const double norm = x0.norm();
    if (!(norm > 0.0)) throw ZeroVector("index_of: zero direction");
    if (x0.size() != info.Sperp_basis.rows() + 0)
        throw DimensionMismatch("index_of: direction has wrong dimension");
    const double tol = 100.0 * info.rank_tol;
    if (info.S_basis.cols() > 0 &&
        (info.S_basis.transpose() * x0).norm() > tol * norm)
        throw NotInSperp("index_of: direction is not orthogonal to S");
    for (int k = 0; k <= info.k0; ++k) {
        const RMat& vk = info.Vk_bases[k];
        const double proj =
            vk.cols() > 0 ? (vk.transpose() * x0).norm() : 0.0;
        if (proj <= tol * norm) return k;
    }
    return info.k0;
}

StabilityReport check_singular_stability(const QuadraticSymbol& q,
                                         const SingularSpaceInfo& info) {
    StabilityReport report;
    if (info.S_basis.cols() == 0) return report;
    const HamiltonMap f = hamilton_map(q);
    report.reF_residual = spectral_norm(RMat(f.re * info.S_basis));
    const RMat image = f.im * info.S_basis;
    const RMat outside =
        image - info.S_basis * (info.S_basis.transpose() * image);
    report.imF_residual = spectral_norm(outside);
    return report;
}

}  // namespace qpolar
