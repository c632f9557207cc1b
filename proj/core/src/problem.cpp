#include "nlsgs/problem.hpp"

#include <cmath>
#include <limits>

#include "nlsgs/errors.hpp"

namespace nlsgs {

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::Full1D: return "full";
    case Geometry::Tensor2D: return "tensor2d";
    case Geometry::Radial: return "radial";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::FD2: return "fd";
    case Method::SP: return "sp";
    case Method::FE: return "fe";
  }
  return "?";
}

Geometry geometry_from_string(const std::string& s) {
  if (s == "full") return Geometry::Full1D;
  if (s == "tensor2d") return Geometry::Tensor2D;
  if (s == "radial") return Geometry::Radial;
  throw ConfigError("problem.geometry: expected full | tensor2d | radial, got '" + s + "'");
}

Method method_from_string(const std::string& s) {
  if (s == "fd") return Method::FD2;
  if (s == "sp") return Method::SP;
  if (s == "fe") return Method::FE;
  throw ConfigError("discretization.kind: expected fd | sp | fe, got '" + s + "'");
}

double alpha_upper_bound(int dim) {
  if (dim <= 2) return std::numeric_limits<double>::infinity();
  return 2.0 / static_cast<double>(dim - 2);
}

void validate(const ProblemSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3) throw ConfigError("problem.dim must be 1, 2 or 3");
  if (!(spec.alpha > 0.0) || !(spec.alpha < alpha_upper_bound(spec.dim)))
    throw ConfigError("problem.alpha must satisfy 0 < alpha < 2/(d-2)_+");
  if (!std::isfinite(spec.omega)) throw ConfigError("problem.omega must be finite");
  if (!(spec.theta >= 0.0)) throw ConfigError("flow.theta must be >= 0");
  switch (spec.geometry) {
    case Geometry::Full1D:
      if (spec.dim != 1) throw ConfigError("problem.geometry=full requires dim = 1");
      if (spec.box.size() != 1) throw ConfigError("problem.domain: one interval expected");
      break;
    case Geometry::Tensor2D:
      if (spec.dim != 2) throw ConfigError("problem.geometry=tensor2d requires dim = 2");
      if (spec.box.size() != 2) throw ConfigError("problem.domain: two intervals expected");
      break;
    case Geometry::Radial:
      if (!(spec.radius > 0.0)) throw ConfigError("problem.radius must be > 0");
      if (!radially_symmetric(spec.potential))
        throw ConfigError("problem.geometry=radial requires a radially symmetric potential");
      break;
  }
  for (const auto& iv : spec.box)
    if (spec.geometry != Geometry::Radial && !(iv.a < iv.b))
      throw ConfigError("problem.domain: each interval needs a < b");
  validate(spec.potential, spec.dim);
}

void check_spectral_condition(const ProblemSpec& spec, double omega0) {
  if (!(spec.omega + spec.theta > omega0))
    throw SpectralConditionError("spectral condition violated: omega + theta = " +
                                 std::to_string(spec.omega + spec.theta) +
                                 " must exceed omega_0 = " + std::to_string(omega0));
}

}  // namespace nlsgs
