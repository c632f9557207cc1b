#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace nlsgs {

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for a symmetric operator. x holds the initial guess.
/// Throws NumericalFailure on negative or zero curvature (indefinite operator), on
/// breakdown, or when the relative residual stays above tol after max_iters.
CgResult pcg(const LinearMap& apply, const LinearMap& precondition, std::span<const double> b,
             std::span<double> x, double tol, std::size_t max_iters);

}  // namespace nlsgs
