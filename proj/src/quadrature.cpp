#include "qpolar/quadrature.hpp"

#include <cmath>

namespace qpolar {

QuadratureRule gauss_legendre(int m) {
    if (m < 1) throw InputError("gauss_legendre: need at least one node");
    RVec x(m), w(m);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_m.
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    // Map [-1, 1] -> [0, 1].
    QuadratureRule rule;
    rule.nodes = (x.array() + 1.0) / 2.0;
    rule.weights = w / 2.0;
    return rule;
}

}  // namespace qpolar
