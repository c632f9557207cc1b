#include "nlsgs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nlsgs/errors.hpp"

namespace nlsgs {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Rayleigh {
  double rho = 0.0;
  double residual = 0.0;
};

// Normalizes u in the mass norm and returns its Rayleigh quotient and residual.
Rayleigh rayleigh(std::vector<double>& u, const DiscreteOperators& ops) {
  const std::size_t n = u.size();
  std::vector<double> mu(n), au(n), t(n);
  ops.apply_mass(u, mu);
  const double m = std::sqrt(dot(u, mu));
  if (!(m > 0.0) || !std::isfinite(m)) throw NumericalFailure("inverse iteration: lost the iterate");
  for (std::size_t i = 0; i < n; ++i) {
    u[i] /= m;
    mu[i] /= m;
  }
  ops.apply_stiffness(u, au);
  ops.apply_potential(u, t);
  for (std::size_t i = 0; i < n; ++i) au[i] += t[i];
  Rayleigh r;
  r.rho = dot(u, au);
  for (std::size_t i = 0; i < n; ++i) au[i] -= r.rho * mu[i];
  ops.solve_mass(au, t);
  r.residual = std::sqrt(std::max(0.0, dot(au, t)));
  return r;
}

std::size_t count_below(const DiscreteOperators& ops, double s) {
  return *ops.factor_hamiltonian(s)->negative_count();
}

std::vector<double> trial_vector(const DiscreteOperators& ops) {
  const auto& g = ops.grid();
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    u[i] = std::exp(-0.5 * r2) + 1e-3;
  }
  return u;
}

// Largest shift below the lowest eigenvalue found by bisection on the inertia count.
double inertia_shift(const DiscreteOperators& ops, double upper) {
  double lo = ops.spectrum_lower_bound().value_or(-1.0) - 1.0;
  for (int k = 0; k < 80 && count_below(ops, lo) > 0; ++k) lo = 2.0 * lo - 1.0;
  double hi = upper;
  for (int k = 0; k < 80 && count_below(ops, hi) == 0; ++k) hi += std::max(1.0, hi - lo);
  while (hi - lo > 1e-7 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(ops, mid) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

LinearGroundState compute_omega0(const ProblemSpec& spec, const DiscreteOperators& ops,
                                 const SpectraOptions& opt) {
  (void)spec;
  const std::size_t n = ops.size();
  std::vector<double> u = trial_vector(ops), b(n), x(n);
  Rayleigh r = rayleigh(u, ops);

  const bool inertia = ops.reveals_inertia();
  const double delta = inertia ? 1e-3 : 1e-2;
  double shift = inertia ? inertia_shift(ops, r.rho)
                         : ops.spectrum_lower_bound().value_or(-1.0) - 1.0;
  auto solver = ops.factor_hamiltonian(shift);

  double prev = r.rho;
  std::vector<double> best = u;
  for (std::size_t it = 1; it <= opt.max_iters; ++it) {
    ops.apply_mass(u, b);
    try {
      solver->solve(b, x);
    } catch (const NumericalFailure&) {
      // The shift passed the lowest eigenvalue: back off and restart from the last iterate.
      shift = shift - std::max(delta, 2.0 * std::abs(r.rho - shift));
      solver = ops.factor_hamiltonian(shift);
      continue;
    }
    u = x;
    r = rayleigh(u, ops);
    best = u;
    const bool done = std::abs(r.rho - prev) <= opt.tol * std::max(1.0, std::abs(r.rho));
    prev = r.rho;
    if (done) {
      double sum = std::accumulate(u.begin(), u.end(), 0.0);
      if (sum < 0.0)
        for (double& v : u) v = -v;
      for (double& v : u)
        if (std::abs(v) < 1e-14) v = 0.0;
      LinearGroundState out;
      out.omega0 = -r.rho;
      out.phi_lin = Field(ops.grid_ptr(), std::move(u), true);
      out.iterations = it;
      out.residual = r.residual;
      return out;
    }
    if (!inertia) {
      const double cand = r.rho - std::max(2.0 * r.residual, delta);
      if (cand > shift + 1e-3 * delta) {
        shift = cand;
        solver = ops.factor_hamiltonian(shift);
      }
    }
  }
  throw IterativeFailure("compute_omega0: no convergence in " + std::to_string(opt.max_iters) +
                             " iterations",
                         best);
}

}  // namespace nlsgs
