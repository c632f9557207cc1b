#include "nlsgs/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "nlsgs/errors.hpp"

namespace nlsgs {

namespace {

double sech(double y) { return 1.0 / std::cosh(y); }

void check_params(double alpha, double omega) {
  if (!(alpha > 0.0)) throw DomainError("exact solution: alpha must be > 0");
  if (!(omega > 0.0)) throw DomainError("exact solution: omega must be > 0");
}

}  // namespace

double free_soliton(double alpha, double omega, double x) {
  check_params(alpha, omega);
  const double s = sech(alpha * std::sqrt(omega) * x);
  return std::pow((alpha + 1.0) * omega * s * s, 1.0 / (2.0 * alpha));
}

double delta_ground_state(double alpha, double omega, double z, double x) {
  return ExactSolution::delta_ground_state(alpha, omega, z).value(x);
}

ExactSolution::ExactSolution(Kind k, double alpha, double omega, double z)
    : kind_(k), alpha_(alpha), omega_(omega), z_(z), shift_(0.0) {
  check_params(alpha, omega);
  if (k == Kind::DeltaGroundState) {
    if (!(z >= 0.0)) throw DomainError("delta ground state: Z must be >= 0");
    if (!(omega > 0.25 * z * z))
      throw DomainError("delta ground state: omega must exceed Z^2/4");
    shift_ = std::atanh(z / (2.0 * std::sqrt(omega)));
  }
}

ExactSolution ExactSolution::free_soliton(double alpha, double omega) {
  return ExactSolution(Kind::FreeSoliton, alpha, omega, 0.0);
}

ExactSolution ExactSolution::delta_ground_state(double alpha, double omega, double z) {
  return ExactSolution(Kind::DeltaGroundState, alpha, omega, z);
}

std::string ExactSolution::name() const {
  return kind_ == Kind::FreeSoliton ? "free_soliton" : "delta_ground_state";
}

double ExactSolution::value(double x) const {
  const double y = alpha_ * std::sqrt(omega_) * std::abs(x) + shift_;
  const double s = sech(y);
  return std::pow((alpha_ + 1.0) * omega_ * s * s, 1.0 / (2.0 * alpha_));
}

double ExactSolution::derivative(double x) const {
  const double y = alpha_ * std::sqrt(omega_) * std::abs(x) + shift_;
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  return -std::sqrt(omega_) * value(x) * std::tanh(y) * sgn;
}

Field sample(const ExactSolution& exact, const GridPtr& grid) {
  if (grid->axes().size() != 1) throw ContractViolation("exact solutions are 1D");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = exact.value(grid->coordinate(0, i));
  return Field(grid, std::move(v), true);
}

double relative_error(const Field& phi, const ExactSolution& exact) {
  if (!phi.grid || phi.grid->axes().size() != 1)
    throw ContractViolation("relative_error: 1D field required");
  const auto ex = sample(exact, phi.grid);
  const double den = max_abs(ex.values);
  if (den == 0.0) throw DomainError("relative_error: exact solution vanishes on the grid");
  return max_abs_diff(phi.values, ex.values) / den;
}

Field rescale_hat(const Field& phi, const DiscreteOperators& ops) {
  const double m = ops.dot_mass(phi.values, phi.values);
  if (!(m > 0.0)) throw DomainError("rescale_hat: zero field");
  std::vector<double> v(phi.values);
  const double s = 1.0 / std::sqrt(m);
  for (double& x : v) x *= s;
  return Field(phi.grid, std::move(v), phi.nonneg_hint);
}

double interpolate_cubic(const Field& phi, double x) {
  const Grid& g = *phi.grid;
  if (g.axes().size() != 1) throw ContractViolation("interpolate_cubic: 1D field required");
  const double a = g.axes()[0].a;
  const double dx = g.node_spacing(0);
  const bool radial = g.geometry() == Geometry::Radial;
  const long offset = radial ? 0 : 1;
  const long n = static_cast<long>(g.count(0));
  const long last = n + offset;  // index of the Dirichlet node at the right end
  auto node = [&](long m) -> double {
    if (radial && m < 0) m = -m;  // even extension across the origin
    const long d = m - offset;
    return (d < 0 || d >= n) ? 0.0 : phi.values[d];
  };
  const double t = (x - a) / dx;
  if (t < (radial ? -static_cast<double>(last) : 0.0) || t > static_cast<double>(last)) return 0.0;
  long k = static_cast<long>(std::floor(t));
  k = std::min(k, last - 1);
  const double s = t - k;
  const double f0 = node(k - 1), f1 = node(k), f2 = node(k + 1), f3 = node(k + 2);
  // Lagrange cubic through nodes k-1, k, k+1, k+2.
  return f0 * (-s * (s - 1.0) * (s - 2.0) / 6.0) + f1 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0) +
         f2 * (-(s + 1.0) * s * (s - 2.0) / 2.0) + f3 * ((s + 1.0) * s * (s - 1.0) / 6.0);
}

Field rescale_check(const Field& phi, double omega, double alpha, const GridPtr& reference) {
  if (!(omega > 0.0)) throw DomainError("rescale_check: omega must be > 0");
  if (max_abs(phi.values) == 0.0) throw DomainError("rescale_check: zero field");
  if (reference->axes().size() != 1) throw ContractViolation("rescale_check: 1D grids only");
  const double scale = std::pow(omega, -1.0 / (2.0 * alpha));
  const double sq = std::sqrt(omega);
  std::vector<double> v(reference->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = scale * interpolate_cubic(phi, reference->coordinate(0, i) / sq);
  return Field(reference, std::move(v), false);
}

}  // namespace nlsgs
