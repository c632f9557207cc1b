#pragma once

#include <string>

#include "nlsgs/grid.hpp"
#include "nlsgs/operators.hpp"

namespace nlsgs {

/// [(α+1)ω sech²(α√ω x)]^{1/(2α)}, the positive ground state for V ≡ 0 in 1D.
double free_soliton(double alpha, double omega, double x);

/// Positive ground state for V = -Zδ in 1D; requires ω > Z²/4.
double delta_ground_state(double alpha, double omega, double z, double x);

class ExactSolution {
 public:
  enum class Kind { FreeSoliton, DeltaGroundState };

  static ExactSolution free_soliton(double alpha, double omega);
  static ExactSolution delta_ground_state(double alpha, double omega, double z);

  Kind kind() const { return kind_; }
  std::string name() const;
  double alpha() const { return alpha_; }
  double omega() const { return omega_; }
  double strength() const { return z_; }

  double value(double x) const;
  /// One-sided derivatives agree away from the origin; at x = 0 the right derivative.
  double derivative(double x) const;

 private:
  ExactSolution(Kind k, double alpha, double omega, double z);
  Kind kind_;
  double alpha_, omega_, z_;
  double shift_;  // atanh(Z / (2√ω))
};

/// max|φ - φ_exact| / max|φ_exact| over the dof nodes (1D grids).
double relative_error(const Field& phi, const ExactSolution& exact);

/// Samples the exact solution on the dof nodes.
Field sample(const ExactSolution& exact, const GridPtr& grid);

/// φ / ||φ||_{L²}.
Field rescale_hat(const Field& phi, const DiscreteOperators& ops);

/// ω^{-1/(2α)} φ(x/√ω) resampled onto `reference` by cubic interpolation (1D grids);
/// zero outside the source domain.
Field rescale_check(const Field& phi, double omega, double alpha, const GridPtr& reference);

/// Cubic Lagrange interpolation of a 1D field (including its Dirichlet zeros) at x.
double interpolate_cubic(const Field& phi, double x);

}  // namespace nlsgs
