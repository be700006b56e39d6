#pragma once

#include "qpolar/types.hpp"

namespace qpolar {

struct QuadratureRule {
    RVec nodes;    // in (0, 1)
    RVec weights;  // sum to 1
};

/// Gauss-Legendre rule with m points, mapped to [0, 1].
QuadratureRule gauss_legendre(int m);

}  // namespace qpolar
