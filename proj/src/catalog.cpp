#include "qpolar/catalog.hpp"

#include <cmath>
#include <random>

#include "qpolar/matfun.hpp"

namespace qpolar {

namespace {

constexpr Complex kI{0.0, 1.0};

double kfp_alpha(double t) {
    if (std::abs(t) < 1e-12) return t * t / 3.0;
    const double c = std::cosh(2.0 * t);
    const double s = std::sinh(2.0 * t);
    return (2.0 * t * c - s) / (4.0 * t * (c + 1.0));
}

double kfp_beta(double t) {
    return std::sinh(2.0 * t) / (2.0 * (std::cosh(2.0 * t) + 1.0));
}

/// Deterministic Box-Muller on top of mt19937_64; avoids the
/// implementation-defined std::normal_distribution.
class Gaussian {
  public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t integer() { return rng_(); }

  private:
    double uniform() {
        // (0, 1), never 0
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
};

}  // namespace

ExampleSpec harmonic(int n) {
    ExampleSpec ex;
    ex.name = "harmonic:" + std::to_string(n);
    ex.symbol = QuadraticSymbol::make(n, CMat::Identity(2 * n, 2 * n));
    ex.expected_k0 = 0;
    ex.expected_dim_S = 0;
    const int dim = 2 * n;
    ex.expected_A = [dim](double) { return RMat::Identity(dim, dim); };
    ex.expected_B = [dim](double) { return RMat::Zero(dim, dim); };
    return ex;
}

ExampleSpec kfp(int n) {
    // Coordinates (x, v, xi, eta), each block of size n.
    const int dim = 4 * n;
    CMat q = CMat::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        q(3 * n + i, 3 * n + i) = 1.0;           // |eta|^2
        q(n + i, n + i) = 1.0;                   // |v|^2
        q(n + i, 2 * n + i) = 0.5 * kI;          // i<v, xi>
        q(2 * n + i, n + i) = 0.5 * kI;
    }
    ExampleSpec ex;
    ex.name = "kfp:" + std::to_string(n);
    ex.symbol = QuadraticSymbol::make(2 * n, q);
    ex.expected_k0 = 1;
    ex.expected_dim_S = n;  // the x-block
    ex.expected_A = [n, dim](double t) {
        RMat a = RMat::Zero(dim, dim);
        for (int i = 0; i < n; ++i) {
            a(n + i, n + i) = 1.0;
            a(2 * n + i, 2 * n + i) = kfp_alpha(t);
            a(2 * n + i, 3 * n + i) = kfp_beta(t);
            a(3 * n + i, 2 * n + i) = kfp_beta(t);
            a(3 * n + i, 3 * n + i) = 1.0;
        }
        return a;
    };
    // The (v, xi) entry is pinned by the factorization identity itself:
    // H_t = e^{2itJA_t} e^{-2itJQ} = I + tanh(t) N with N^2 = 0, so
    // B_t = (2tJ)^{-1} Log H_t has entry tanh(t)/(2t). Consistent with the
    // limit B_0 = Im Q (entry 1/2).
    ex.expected_B = [n, dim](double t) {
        const double b =
            std::abs(t) < 1e-12 ? 0.5 : std::tanh(t) / (2.0 * t);
        RMat out = RMat::Zero(dim, dim);
        for (int i = 0; i < n; ++i) {
            out(n + i, 2 * n + i) = b;
            out(2 * n + i, n + i) = b;
        }
        return out;
    };
    return ex;
}

ExampleSpec kolmogorov() {
    CMat q = CMat::Zero(4, 4);
    q(3, 3) = 1.0;        // xi_2^2
    q(1, 2) = 0.5 * kI;   // i x_2 xi_1
    q(2, 1) = 0.5 * kI;
    ExampleSpec ex;
    ex.name = "kolmogorov";
    ex.symbol = QuadraticSymbol::make(2, q);
    ex.expected_k0 = 1;
    ex.expected_dim_S = 2;  // the (x_1, x_2) plane
    ex.expected_A = [](double t) {
        RMat a = RMat::Zero(4, 4);
        a(2, 2) = t * t / 3.0;
        a(2, 3) = t / 2.0;
        a(3, 2) = t / 2.0;
        a(3, 3) = 1.0;
        return a;
    };
    ex.expected_B = [](double) {
        RMat b = RMat::Zero(4, 4);
        b(1, 2) = 0.5;  // x_2 xi_1
        b(2, 1) = 0.5;
        return b;
    };
    return ex;
}

ExampleSpec ou(const RMat& Qm, const RMat& R, const RMat& B) {
    const int n = static_cast<int>(Qm.rows());
    if (R.rows() != n || B.rows() != n || Qm.cols() != n || R.cols() != n ||
        B.cols() != n)
        throw DimensionMismatch("ou: Qm, R, B must all be n x n");
    CMat q = CMat::Zero(2 * n, 2 * n);
    q.topLeftCorner(n, n) = (0.5 * R).cast<Complex>();
    q.bottomRightCorner(n, n) = (0.5 * Qm).cast<Complex>();
    q.topRightCorner(n, n) = 0.5 * kI * B.transpose().cast<Complex>();
    q.bottomLeftCorner(n, n) = 0.5 * kI * B.cast<Complex>();
    ExampleSpec ex;
    ex.name = "ou";
    ex.symbol = QuadraticSymbol::make(n, q);
    return ex;
}

ExampleSpec ou_default() {
    RMat qm = RMat::Zero(2, 2);
    qm(0, 0) = 1.0;
    RMat r = RMat::Zero(2, 2);
    RMat b = RMat::Zero(2, 2);
    b(1, 0) = 1.0;
    ExampleSpec ex = ou(qm, r, b);
    ex.expected_k0 = 1;
    ex.expected_dim_S = 2;  // R^2_x x {0}
    return ex;
}

QuadraticSymbol random_accretive(int n, std::uint64_t seed, double im_scale) {
    if (n < 1) throw InputError("random_accretive: n must be >= 1");
    Gaussian gauss(seed);
    const int dim = 2 * n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

    RMat l(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) l(i, j) = scale * gauss();

    std::vector<int> dead;
    if (gauss.integer() % 2 == 0) {
        // Deliberately rank-deficient Re Q.
        const int count = 1 + static_cast<int>(gauss.integer() % n);
        std::vector<int> cols(dim);
        for (int i = 0; i < dim; ++i) cols[i] = i;
        for (int i = 0; i < count; ++i) {
            const int j = i + static_cast<int>(gauss.integer() % (dim - i));
            std::swap(cols[i], cols[j]);
            l.col(cols[i]).setZero();
        }
        // Half the time the same coordinates drop out of the symbol
        // entirely (rows of L and rows/columns of Im Q), which puts them
        // into the singular space; a fully random Im Q would almost surely
        // rotate the kernel away and leave S = {0}.
        if (gauss.integer() % 2 == 0) {
            dead.assign(cols.begin(), cols.begin() + count);
            for (int z : dead) l.row(z).setZero();
        }
    }

    RMat im = RMat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            const double v = im_scale * scale * gauss();
            im(i, j) = v;
            im(j, i) = v;
        }
    for (int z : dead) {
        im.row(z).setZero();
        im.col(z).setZero();
    }

    const RMat re = l * l.transpose();
    return QuadraticSymbol::make(n, re.cast<Complex>() +
                                        kI * im.cast<Complex>());
}

ExampleSpec find_example(const std::string& spec) {
    std::string name = spec;
    int n = 1;
    bool has_n = false;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        try {
            n = std::stoi(spec.substr(colon + 1));
        } catch (const std::exception&) {
            throw InputError("find_example: bad dimension in '" + spec + "'");
        }
        if (n < 1) throw InputError("find_example: n must be >= 1");
        has_n = true;
    }
    if (name == "harmonic") return harmonic(n);
    if (name == "kfp") return kfp(n);
    if (name == "kolmogorov") {
        if (has_n) throw InputError("find_example: kolmogorov is fixed-size");
        return kolmogorov();
    }
    if (name == "ou") {
        if (has_n) throw InputError("find_example: ou is fixed-size");
        return ou_default();
    }
    throw InputError("find_example: unknown example '" + spec + "'");
}

}  // namespace qpolar
