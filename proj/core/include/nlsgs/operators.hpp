#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nlsgs/grid.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

/// Prefactored solve of a fixed symmetric system. Implementations are immutable after
/// construction and safe to call concurrently.
class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual void solve(std::span<const double> b, std::span<double> x) const = 0;
  /// Number of negative eigenvalues of the factored matrix, when the factorization reveals it.
  virtual std::optional<std::size_t> negative_count() const { return std::nullopt; }
};

/// Discrete operators of one spatial discretization, all in weak ("dual") form:
///   mass      M   ~ (u, v)
///   stiffness K   ~ (∇u, ∇v)               (= W·(-Δ_h) for FD and SP, W the quadrature weight)
///   potential Vm  ~ ∫ V u v                 (nodal for FD/SP, quadrature or point values for FE)
///   sampled   B_g ~ ∫ g u v at the nonlinear quadrature points.
/// Functionals of a state u are quadratic forms of these, so every quantity the flow
/// optimizes uses one and the same quadrature.
class DiscreteOperators {
 public:
  virtual ~DiscreteOperators() = default;

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return grid_->size(); }
  Method method() const { return method_; }
  int fe_order() const { return fe_order_; }
  bool lumped() const { return lumped_; }
  /// Spatial spacing h (element size for FE).
  double h() const { return h_; }

  // L2 structure
  virtual void apply_mass(std::span<const double> u, std::span<double> out) const = 0;
  virtual void solve_mass(std::span<const double> b, std::span<double> out) const = 0;
  virtual std::vector<double> mass_diagonal() const = 0;
  virtual double dot_mass(std::span<const double> u, std::span<const double> v) const;

  // -Δ
  virtual void apply_stiffness(std::span<const double> u, std::span<double> out) const = 0;
  virtual std::vector<double> stiffness_diagonal() const = 0;

  // V
  virtual void apply_potential(std::span<const double> u, std::span<double> out) const = 0;
  virtual double potential_energy(std::span<const double> u) const = 0;
  virtual std::vector<double> potential_diagonal() const = 0;

  // nonlinear quadrature
  virtual std::size_t quadrature_size() const = 0;
  virtual void sample(std::span<const double> u, std::span<double> uq) const = 0;
  virtual std::span<const double> quadrature_weights() const = 0;
  virtual void apply_sampled(std::span<const double> gq, std::span<const double> u,
                             std::span<double> out) const = 0;
  virtual std::vector<double> sampled_diagonal(std::span<const double> gq) const = 0;

  /// ∫ |u|^p with the nonlinear quadrature.
  double power_integral(std::span<const double> u, double p) const;
  /// weak form of |u|^{2α} u.
  void apply_power(std::span<const double> u, double alpha, std::span<double> out) const;

  /// Prefactored solver for c·M + K (c > 0). Reused unchanged across flow iterations.
  virtual std::unique_ptr<LinearSolver> factor_shifted(double c) const = 0;
  /// Solver for K + Vm - s·M (SPD when s < smallest eigenvalue). Spectral backends solve
  /// iteratively and throw NumericalFailure on detected negative curvature.
  virtual std::unique_ptr<LinearSolver> factor_hamiltonian(double s) const = 0;
  /// True when factor_hamiltonian reports inertia.
  virtual bool reveals_inertia() const { return false; }
  /// Guaranteed lower bound of the spectrum of (K + Vm, M) when known.
  virtual std::optional<double> spectrum_lower_bound() const { return std::nullopt; }

  /// Heat semigroup exp(tΔ) (sine pseudospectral only).
  virtual bool supports_heat() const { return false; }
  virtual void apply_heat(double t, std::span<const double> u, std::span<double> out) const;

  /// -Δ_h + V as a grid function (FD/SP collocation; FE via the mass solve). Requires a
  /// potential that acts pointwise.
  void apply_hamiltonian_strong(std::span<const double> u, double omega,
                                std::span<double> out) const;
  /// Whether V acts as a bounded pointwise multiplier (no delta, no inverse power).
  bool pointwise_potential() const { return pointwise_potential_; }

  /// Evaluation of the discrete function between nodes (1D grids). FE uses its shape
  /// functions; FD/SP use piecewise-linear interpolation.
  virtual double value_at(std::span<const double> u, double x) const;
  virtual double derivative_at(std::span<const double> u, double x) const;

  /// Measure factor at coordinate x (1 on full grids, |S^{d-1}| r^{d-1} on radial grids).
  double measure(double x) const;

 protected:
  DiscreteOperators(GridPtr grid, Method method, int fe_order, bool lumped, double h,
                    bool pointwise_potential)
      : grid_(std::move(grid)),
        method_(method),
        fe_order_(fe_order),
        lumped_(lumped),
        h_(h),
        pointwise_potential_(pointwise_potential) {}

 private:
  GridPtr grid_;
  Method method_;
  int fe_order_;
  bool lumped_;
  double h_;
  bool pointwise_potential_;
};

using OperatorsPtr = std::shared_ptr<const DiscreteOperators>;

/// Builds the operators for a full-1D or tensor-2D problem; radial problems are forwarded
/// to radial_reduce. Throws ConfigError on an incompatible potential/discretization pair.
OperatorsPtr assemble(const ProblemSpec& spec, const DiscretizationSpec& disc);

/// 1D operators in r for radial(d) geometry with r^{d-1}-weighted forms (FE only).
OperatorsPtr radial_reduce(const ProblemSpec& spec, const DiscretizationSpec& disc);

/// Surface area of the unit sphere in R^d (2 for d = 1: even extension).
double unit_sphere_area(int d);

/// Convenience: solve (1/τ + ω + θ)M x + K x = rhs with a freshly factored operator.
std::vector<double> implicit_solve(const DiscreteOperators& ops, std::span<const double> rhs,
                                   double tau, const ProblemSpec& spec);

}  // namespace nlsgs
