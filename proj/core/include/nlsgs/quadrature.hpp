#pragma once

#include <vector>

namespace nlsgs {

struct QuadratureRule {
  std::vector<double> nodes;    ///< on [0, 1]
  std::vector<double> weights;  ///< sum to the integral of the weight function
};

/// n-point Gauss rule on [0, 1] for the weight x^beta (beta > -1); beta = 0 is Gauss-Legendre.
/// Exact for polynomials of degree 2n-1 times the weight.
QuadratureRule gauss_jacobi01(int n, double beta);

/// Gauss-Legendre on [0, 1].
inline QuadratureRule gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0); }

}  // namespace nlsgs
