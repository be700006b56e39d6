#include "qpolar/certify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpolar/matfun.hpp"
#include "qpolar/polar.hpp"

namespace qpolar {

namespace {

struct RangeProjection {
    RMat basis;  // 2n x r eigenvectors of K kept
    RVec eigenvalues;
};

RangeProjection project_range(const RMat& k, double rank_tol) {
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (k + k.transpose()));
    const RVec& lambda = es.eigenvalues();
    const double lambda_max = lambda.maxCoeff();
    if (!(lambda_max > 0.0))
        throw DegenerateKappa("pencil: comparison form vanishes identically");
    const double threshold = rank_tol * lambda_max;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda(i) > threshold) kept.push_back(i);
    RangeProjection proj;
    proj.basis.resize(k.rows(), kept.size());
    proj.eigenvalues.resize(kept.size());
    for (size_t j = 0; j < kept.size(); ++j) {
        proj.basis.col(j) = es.eigenvectors().col(kept[j]);
        proj.eigenvalues(j) = lambda(kept[j]);
    }
    return proj;
}

RVec positive_powers(const RVec& v, double p) {
    RVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = std::pow(v(i), p);
    return out;
}

/// sup over range(K) of <x0, X>^2 / q_K(X) = x0^T K^+ x0.
double rank_one_supremum(const RMat& k, const RVec& x0, double rank_tol) {
    const RangeProjection proj = project_range(k, rank_tol);
    const RVec y = proj.basis.transpose() * x0;
    return (y.array().square() / proj.eigenvalues.array()).sum();
}

std::vector<double> log_of(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(),
                   [](double x) { return std::log(x); });
    return out;
}

}  // namespace

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t m = x.size();
    if (m != y.size() || m < 2)
        throw InputError("fit_slope: need two or more points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InputError("fit_slope: degenerate abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = y[i] - intercept - fit.slope * x[i];
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / m);
    if (m > 2) {
        const double var = ss / (m - 2) / sxx;
        fit.half_width = 2.0 * std::sqrt(var);
    }
    return fit;
}

RVec pencil_eigenvalues(const RMat& a, const RMat& k, double rank_tol) {
    if (a.rows() != k.rows() || a.cols() != k.cols())
        throw DimensionMismatch("pencil: size mismatch");
    const RangeProjection proj = project_range(k, rank_tol);
    const RVec d = positive_powers(proj.eigenvalues, -0.5);
    const RMat reduced_a = proj.basis.transpose() * a * proj.basis;
    RMat pencil = d.asDiagonal() * reduced_a * d.asDiagonal();
    pencil = 0.5 * (pencil + pencil.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RMat> es(pencil, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double pencil_min_eigenvalue(const RMat& a, const RMat& k, double rank_tol) {
    return pencil_eigenvalues(a, k, rank_tol).minCoeff();
}

double best_constant(const QuadraticSymbol& q, const SingularSpaceInfo& info,
                     double t, double rank_tol) {
    if (!(t > 0.0)) throw InputError("best_constant: t must be > 0");
    return pencil_min_eigenvalue(a_matrix(q, t), kappa_matrix(q, info, t),
                                 rank_tol);
}

double best_constant_capped(const QuadraticSymbol& q,
                            const SingularSpaceInfo& info, double t, int k_cap,
                            double rank_tol) {
    if (!(t > 0.0)) throw InputError("best_constant_capped: t must be > 0");
    return pencil_min_eigenvalue(
        a_matrix(q, t), kappa_matrix_capped(q, info.k0, t, k_cap), rank_tol);
}

BoundCertificate certify_lower_bound(const QuadraticSymbol& q,
                                     const SingularSpaceInfo& info,
                                     const std::vector<double>& t_grid,
                                     const std::vector<RVec>& directions,
                                     double rank_tol,
                                     std::optional<int> k_cap) {
    if (t_grid.size() < 3)
        throw InputError("certify_lower_bound: need a grid of >= 3 points");
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1]))
            throw InputError("certify_lower_bound: grid must be increasing");
    if (!(t_grid.front() > 0.0))
        throw InputError("certify_lower_bound: grid must be positive");

    BoundCertificate cert;
    cert.t_grid = t_grid;
    cert.k0 = info.k0;
    for (double t : t_grid) {
        const double c = k_cap ? best_constant_capped(q, info, t, *k_cap,
                                                      rank_tol)
                               : best_constant(q, info, t, rank_tol);
        cert.c_values.push_back(c);
    }
    cert.c_min_observed =
        *std::min_element(cert.c_values.begin(), cert.c_values.end());

    // Small-t decay heuristic on the three smallest grid points: more than
    // 10% loss per halving of t counts as decay toward zero.
    const double c1 = cert.c_values[0], c2 = cert.c_values[1],
                 c3 = cert.c_values[2];
    if (c1 < c2 && c2 < c3 && c1 > 0.0) {
        const double slope = (std::log(c3) - std::log(c1)) /
                             (std::log(t_grid[2]) - std::log(t_grid[0]));
        cert.decay_suspected = std::pow(2.0, -slope) < 0.9;
    }
    cert.pass = cert.c_min_observed > 0.0 && !cert.decay_suspected;

    if (info.Sperp_basis.cols() > 0)
        cert.coercivity = coercivity_exponent(q, info, t_grid);
    for (const RVec& x0 : directions)
        cert.direction_results.push_back(
            direction_bound(q, info, t_grid.back(), x0, rank_tol));
    return cert;
}

SlopeFit coercivity_exponent(const QuadraticSymbol& q,
                             const SingularSpaceInfo& info,
                             const std::vector<double>& t_grid) {
    if (info.Sperp_basis.cols() == 0)
        throw DegenerateKappa("coercivity_exponent: S is the whole space");
    std::vector<double> eigmin;
    for (double t : t_grid) {
        const RMat k = kappa_matrix(q, info, t);
        const RMat restricted =
            info.Sperp_basis.transpose() * k * info.Sperp_basis;
        Eigen::SelfAdjointEigenSolver<RMat> es(
            0.5 * (restricted + restricted.transpose()),
            Eigen::EigenvaluesOnly);
        const double lambda = es.eigenvalues().minCoeff();
        if (!(lambda > 0.0))
            throw DegenerateKappa(
                "coercivity_exponent: kappa_t is singular on S^perp");
        eigmin.push_back(lambda);
    }
    return fit_slope(log_of(std::vector<double>(t_grid)), log_of(eigmin));
}

DirectionBound direction_bound(const QuadraticSymbol& q,
                               const SingularSpaceInfo& info, double t,
                               const RVec& x0, double rank_tol) {
    DirectionBound bound;
    bound.x0 = x0;
    bound.index = index_of(info, x0);

    auto sup_pair = [&](double s) {
        const double sup_k =
            rank_one_supremum(kappa_matrix(q, info, s), x0, rank_tol);
        const double sup_a = rank_one_supremum(a_matrix(q, s), x0, rank_tol);
        return std::pair<double, double>(sup_k, sup_a);
    };

    std::tie(bound.sup_kappa, bound.sup_a) = sup_pair(t);

    // Local refinement toward smaller t: five points on [t/4, t].
    std::vector<double> ts, logk, loga;
    for (int i = 0; i < 5; ++i) {
        const double s = t * std::pow(0.25, 1.0 - i / 4.0);
        const auto [sk, sa] = sup_pair(s);
        ts.push_back(std::log(s));
        logk.push_back(std::log(sk));
        loga.push_back(std::log(sa));
    }
    bound.slope_kappa = fit_slope(ts, logk).slope;
    bound.slope_a = fit_slope(ts, loga).slope;
    return bound;
}

SmoothingTable smoothing_exponents(const QuadraticSymbol& q,
                                   const SingularSpaceInfo& info,
                                   const std::vector<RVec>& directions) {
    (void)q;
    SmoothingTable table;
    int sum = 0;
    for (size_t j = 0; j < directions.size(); ++j) {
        SmoothingRow row;
        row.x0 = directions[j];
        try {
            row.index = index_of(info, directions[j]);
        } catch (const NotInSperp&) {
            throw NotInSperp("smoothing_exponents: direction " +
                             std::to_string(j) + " is not in S^perp");
        }
        sum += row.index;
        table.rows.push_back(row);
    }
    table.total_exponent = sum + 0.5 * static_cast<double>(directions.size());
    return table;
}

std::vector<SubellipticRow> subelliptic_report(const QuadraticSymbol& q,
                                               const SingularSpaceInfo& info) {
    std::vector<SubellipticRow> rows;
    for (int k = 0; k <= info.k0; ++k) {
        SubellipticRow row;
        row.k = k;
        row.pk = pk_matrix(q, k, info.k0);
        row.exponent = 2.0 / (2.0 * k + 1.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qpolar
