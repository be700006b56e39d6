#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "qpolar/symbols.hpp"
#include "qpolar/types.hpp"

namespace qpolar {

/// A named symbol with whatever closed-form answers are known for it.
struct ExampleSpec {
    std::string name;
    QuadraticSymbol symbol;
    int expected_k0 = -1;       // -1: unknown
    int expected_dim_S = -1;    // -1: unknown
    std::function<RMat(double)> expected_A;  // empty when no closed form
    std::function<RMat(double)> expected_B;
};

/// q = |x|^2 + |xi|^2 (Q = I). S = {0}, k0 = 0, A_t = I, B_t = 0.
ExampleSpec harmonic(int n);

/// Kramers-Fokker-Planck without external potential: Weyl symbol
/// q(x, v, xi, eta) = |eta|^2 + |v|^2 + i<v, xi> on R^{4n}. k0 = 1, the
/// singular space is the x-block, and A_t, B_t have hyperbolic closed forms.
ExampleSpec kfp(int n);

/// Kolmogorov operator: q = xi_2^2 + i x_2 xi_1 on R^4. a_t expands the
/// splitting formula exactly: A_t has the (t^2/3, t/2, 1) xi-block and
/// B_t is the constant matrix of x_2 xi_1.
ExampleSpec kolmogorov();

/// Generalized Ornstein-Uhlenbeck with diffusion Qm, potential R and drift
/// B (all n x n, Qm and R symmetric PSD); the constant term of the Weyl
/// symbol is dropped.
ExampleSpec ou(const RMat& Qm, const RMat& R, const RMat& B);

/// The OU instance used throughout the tests: R = 0, Qm = diag(1, 0),
/// B = [[0,0],[1,0]]; singular space = R^2_x x {0}, k0 = 1.
ExampleSpec ou_default();

/// Seeded random accretive symbol: Re Q = L L^T with Gaussian L (scaled by
/// 1/sqrt(2n); rank-deficient with probability 1/2), Im Q random symmetric
/// scaled by im_scale. Byte-deterministic for a fixed seed.
QuadraticSymbol random_accretive(int n, std::uint64_t seed,
                                 double im_scale = 1.0);

/// Resolves "name[:n]" strings used by the CLI ("kfp:2", "harmonic:1", ...).
ExampleSpec find_example(const std::string& spec);

}  // namespace qpolar
