#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nlsgs {

struct ZeroPotential {};

struct DeltaSite {
  double center = 0.0;
  double strength = 1.0;  ///< Z > 0; contributes -Z delta(x - center)
};

/// Sum of attractive point interactions, 1D only.
struct DeltaSum {
  std::vector<DeltaSite> sites;
};

struct WellInterval {
  double lo = -1.0;
  double hi = 1.0;
};
struct WellBall {
  double radius = 1.0;
};

/// V = -depth inside the region, 0 outside.
struct FiniteWell {
  double depth = 1.0;
  std::variant<WellInterval, WellBall> region = WellBall{};
};

/// V = -gamma / |x|^sigma with 0 < sigma < min(2, d).
struct InversePower {
  double gamma = 1.0;
  double sigma = 0.5;
};

/// V = -depth * exp(-|x|^2).
struct GaussianWell {
  double depth = 1.0;
};

/// V = -depth * (exp(-(x-c)^2) + exp(-(x+c)^2)), 1D.
struct DoubleWellGaussian {
  double center = 2.0;
  double depth = 1.0;
};

/// V = -depth * exp(-kappa |x|^2) (1 - cos(pi x)) (1 - cos(pi y)), 2D.
/// kappa = 1/2 reproduces omega_0 = 0.4652 and the mass values m(omega) = 4.78, 26.88, 46.80.
struct TrappedCosineGaussian {
  double depth = 2.0;
  double kappa = 0.5;
};

/// Nodal samples on the degrees of freedom of a specific grid.
struct Tabulated {
  std::vector<double> values;
};

using Potential = std::variant<ZeroPotential, DeltaSum, FiniteWell, InversePower, GaussianWell,
                               DoubleWellGaussian, TrappedCosineGaussian, Tabulated>;

std::string potential_name(const Potential& v);

/// Pointwise value at a physical point (for radial geometry pass {r}).
/// Delta sums evaluate to 0 away from the centers; their action is nodal.
/// Tabulated potentials cannot be evaluated pointwise.
double evaluate(const Potential& v, std::span<const double> x);

/// True when V depends on |x| only.
bool radially_symmetric(const Potential& v);

/// Checks parameter bounds and nonpositivity; `dim` is the physical dimension.
void validate(const Potential& v, int dim);

/// Points where V is singular or discontinuous in 1D (delta centers, well edges, origin).
std::vector<double> singular_points_1d(const Potential& v);

}  // namespace nlsgs
