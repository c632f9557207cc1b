#pragma once

#include <string>
#include <vector>

#include "nlsgs/potential.hpp"

namespace nlsgs {

enum class Geometry { Full1D, Tensor2D, Radial };
enum class Method { FD2, SP, FE };

struct Interval {
  double a = -1.0;
  double b = 1.0;
  double length() const { return b - a; }
};

/// Physical problem: -Δφ + Vφ + ωφ - |φ|^{2α}φ = 0 on a truncated domain.
struct ProblemSpec {
  double alpha = 1.0;
  double omega = 1.0;
  int dim = 1;
  Geometry geometry = Geometry::Full1D;
  Potential potential = ZeroPotential{};
  std::vector<Interval> box{Interval{-16.0, 16.0}};  ///< Full1D / Tensor2D
  double radius = 16.0;                             ///< Radial
  double theta = 0.0;                               ///< shift of the modified BF scheme
};

struct DiscretizationSpec {
  Method method = Method::SP;
  double h = 1.0 / 16.0;
  int fe_order = 1;
  bool lumped = false;  ///< mass lumping, linear FE only
};

std::string to_string(Geometry g);
std::string to_string(Method m);
Geometry geometry_from_string(const std::string& s);
Method method_from_string(const std::string& s);

/// Upper bound for alpha: 2/(d-2)_+ (infinite for d <= 2).
double alpha_upper_bound(int dim);

/// Structural checks (alpha range, geometry/dim pairing, potential bounds, theta >= 0).
/// The spectral condition omega + theta > omega_0 is checked separately once omega_0 is known.
void validate(const ProblemSpec& spec);

/// Throws SpectralConditionError unless omega + theta > omega0.
void check_spectral_condition(const ProblemSpec& spec, double omega0);

}  // namespace nlsgs
