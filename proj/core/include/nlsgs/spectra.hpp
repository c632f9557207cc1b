#pragma once

#include <cstddef>

#include "nlsgs/grid.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

/// Lowest eigenpair of H₀ = -Δ + V on the truncated domain.
struct LinearGroundState {
  double omega0 = 0.0;  ///< minus the smallest Rayleigh quotient
  Field phi_lin;        ///< unit mass, nonnegative up to roundoff
  std::size_t iterations = 0;
  double residual = 0.0;  ///< ||H₀φ + ω₀φ|| in the dual L² norm
};

struct SpectraOptions {
  double tol = 1e-12;  ///< on the change of the Rayleigh quotient between iterations
  std::size_t max_iters = 500;
};

/// Shifted inverse iteration. Banded backends first move the shift just below the lowest
/// eigenvalue by Sylvester-inertia bisection; sine-basis backends start below the potential
/// minimum and tighten the shift from residual bounds.
LinearGroundState compute_omega0(const ProblemSpec& spec, const DiscreteOperators& ops,
                                 const SpectraOptions& opt = {});

}  // namespace nlsgs
