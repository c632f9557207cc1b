#include "nlsgs/nehari.hpp"

#include <cmath>

#include "nlsgs/errors.hpp"
#include "nlsgs/functionals.hpp"

namespace nlsgs {

double lambda_omega(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops) {
  check_field(phi, ops);
  return lambda_omega(phi.values, spec, ops);
}

double lambda_omega(std::span<const double> u, const ProblemSpec& spec,
                    const DiscreteOperators& ops) {
  if (max_abs(u) == 0.0) throw DomainError("lambda_omega: zero field");
  const double istar = quadratic_parts(u, ops).quadratic(spec.omega);
  if (!(istar > 0.0))
    throw SpectralConditionError("lambda_omega: I*_omega(phi) <= 0, omega is not above omega_0");
  const double p = ops.power_integral(u, 2.0 * spec.alpha + 2.0);
  if (!(p > 0.0)) throw DomainError("lambda_omega: vanishing L^{2alpha+2} norm");
  return std::pow(istar / p, 1.0 / (2.0 * spec.alpha));
}

NehariProjection project_to_nehari(const Field& phi, const ProblemSpec& spec,
                                   const DiscreteOperators& ops) {
  check_field(phi, ops);
  NehariProjection out;
  const auto f = functionals(phi.values, spec, ops);
  out.input_nehari_sign = f.nehari > 0.0 ? 1 : (f.nehari < 0.0 ? -1 : 0);
  out.lambda = lambda_omega(phi.values, spec, ops);
  std::vector<double> v(phi.values);
  for (double& x : v) x *= out.lambda;
  out.projected = Field(phi.grid, std::move(v), phi.nonneg_hint);
  return out;
}

bool on_nehari_manifold(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops,
                        double tol) {
  const auto f = functionals(phi, spec, ops);
  return std::abs(f.nehari) <= tol * std::max(1.0, f.quadratic);
}

Field gaussian_seed(const ProblemSpec& spec, const DiscreteOperators& ops,
                    const std::vector<double>& shift) {
  const auto& g = ops.grid();
  const std::size_t dim = g.axes().size();
  if (!shift.empty() && shift.size() != dim)
    throw ConfigError("seed.shift: expected " + std::to_string(dim) + " components");
  if (g.geometry() == Geometry::Radial) {
    for (double s : shift)
      if (s != 0.0) throw ConfigError("seed.shift: radial seeds must be centered");
  }
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = x[k] - (shift.empty() ? 0.0 : shift[k]);
      r2 += d * d;
    }
    v[i] = std::exp(-0.5 * r2);
  }
  Field u(ops.grid_ptr(), std::move(v), true);
  if (max_abs(u.values) == 0.0) throw ConfigError("seed.shift: the seed vanishes on the grid");
  return project_to_nehari(u, spec, ops).projected;
}

}  // namespace nlsgs
