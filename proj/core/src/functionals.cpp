#include "nlsgs/functionals.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsgs/errors.hpp"
#include "nlsgs/format.hpp"

namespace nlsgs {

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}
}  // namespace

void check_field(const Field& phi, const DiscreteOperators& ops) {
  if (!phi.grid || (phi.grid.get() != &ops.grid() && !phi.grid->same_layout(ops.grid())))
    throw ContractViolation("field grid does not match the operators' grid");
  if (phi.values.size() != ops.size())
    throw ContractViolation("field size does not match the operators' grid");
  if (!all_finite(phi.values)) throw InvalidState("field holds non-finite values");
}

QuadraticParts quadratic_parts(std::span<const double> u, const DiscreteOperators& ops) {
  std::vector<double> t(u.size());
  QuadraticParts q;
  ops.apply_stiffness(u, t);
  q.kinetic = dot(u, t);
  q.potential = ops.potential_energy(u);
  q.mass = ops.dot_mass(u, u);
  return q;
}

FunctionalReport functionals(const Field& phi, const ProblemSpec& spec,
                             const DiscreteOperators& ops) {
  check_field(phi, ops);
  return functionals(phi.values, spec, ops);
}

FunctionalReport functionals(std::span<const double> u, const ProblemSpec& spec,
                             const DiscreteOperators& ops) {
  const double a = spec.alpha;
  const auto q = quadratic_parts(u, ops);
  FunctionalReport r;
  r.mass = q.mass;
  r.potential_energy = q.potential;
  r.lp_norm_pow = ops.power_integral(u, 2.0 * a + 2.0);
  r.quadratic = q.quadratic(spec.omega);
  r.nehari = r.quadratic - r.lp_norm_pow;
  r.energy = q.kinetic + q.potential - r.lp_norm_pow / (a + 1.0);
  r.action = r.quadratic - r.lp_norm_pow / (a + 1.0);
  if (r.mass > 0.0) {
    r.mu_g = (q.kinetic + q.potential - r.lp_norm_pow) / r.mass;
  } else {
    r.mu_g = std::numeric_limits<double>::quiet_NaN();
    r.mu_g_defined = false;
  }
  return r;
}

nlohmann::json to_json(const FunctionalReport& r) {
  nlohmann::json j;
  j["mass"] = r.mass;
  j["energy"] = r.energy;
  j["action"] = r.action;
  j["nehari"] = r.nehari;
  j["quadratic"] = r.quadratic;
  j["potential_energy"] = r.potential_energy;
  j["lp_norm_pow"] = r.lp_norm_pow;
  if (r.mu_g_defined) {
    j["mu_g"] = r.mu_g;
  } else {
    j["mu_g"] = nullptr;
    j["mu_g_error"] = "zero mass";
  }
  return j;
}

std::string csv_header(const FunctionalReport&) {
  return "mass,energy,action,nehari,quadratic,potential_energy,lp_norm_pow,mu_g";
}

std::string to_csv_row(const FunctionalReport& r) {
  return join_csv({r.mass, r.energy, r.action, r.nehari, r.quadratic, r.potential_energy,
                   r.lp_norm_pow, r.mu_g});
}

ResidualReport snls_residual(const Field& phi, const ProblemSpec& spec,
                             const DiscreteOperators& ops) {
  check_field(phi, ops);
  return snls_residual(phi.values, spec, ops);
}

ResidualReport snls_residual(std::span<const double> u, const ProblemSpec& spec,
                             const DiscreteOperators& ops) {
  ResidualReport rep;
  rep.norm = "L2";
  if (max_abs(u) == 0.0) {
    rep.trivial = true;
    return rep;
  }
  const std::size_t n = u.size();
  std::vector<double> r(n), t(n);
  ops.apply_stiffness(u, r);
  ops.apply_potential(u, t);
  for (std::size_t i = 0; i < n; ++i) r[i] += t[i];
  ops.apply_mass(u, t);
  for (std::size_t i = 0; i < n; ++i) r[i] += spec.omega * t[i];
  ops.apply_power(u, spec.alpha, t);
  for (std::size_t i = 0; i < n; ++i) r[i] -= t[i];
  ops.solve_mass(r, t);
  rep.value = std::sqrt(std::max(0.0, dot(r, t)));
  return rep;
}

}  // namespace nlsgs
