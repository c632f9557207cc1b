#include "nlsgs/flows.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "nlsgs/errors.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/krylov.hpp"
#include "nlsgs/nehari.hpp"

namespace nlsgs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void require_pointwise(const DiscreteOperators& ops, const char* what) {
  if (!ops.pointwise_potential())
    throw ConfigError(std::string(what) +
                      " needs a potential acting pointwise (not delta or inverse_power)");
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::BF: return "bf";
    case Scheme::BE: return "be";
    case Scheme::PGF_BF: return "pgf_bf";
    case Scheme::TS: return "ts";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "bf") return Scheme::BF;
  if (s == "be") return Scheme::BE;
  if (s == "pgf_bf" || s == "pgf") return Scheme::PGF_BF;
  if (s == "ts") return Scheme::TS;
  throw ConfigError("flow.scheme: expected bf | be | pgf_bf | ts, got '" + s + "'");
}

std::string to_string(StopNorm s) { return s == StopNorm::Max ? "max" : "l2"; }

StopNorm stop_norm_from_string(const std::string& s) {
  if (s == "max") return StopNorm::Max;
  if (s == "l2" || s == "L2") return StopNorm::L2;
  throw ConfigError("flow.stop_norm: expected max | l2, got '" + s + "'");
}

void validate(const FlowConfig& cfg) {
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau)) throw ConfigError("flow.tau must be > 0");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("flow.epsilon must be > 0");
  if (cfg.max_iters < 1) throw ConfigError("flow.max_iters must be >= 1");
}

double effective_theta(const ProblemSpec& spec) {
  if (spec.omega + spec.theta > 0.0) return spec.theta;
  return -spec.omega + 1.0;
}

double splitting_nonlinear_ratio(double c, double phi, double alpha, double t) {
  const double p = std::pow(std::abs(phi), 2.0 * alpha);
  double r;
  if (c == 0.0) {
    r = 1.0 / (1.0 - 2.0 * alpha * t * p);
    if (!(1.0 - 2.0 * alpha * t * p > 0.0)) return -1.0;
  } else {
    const double den = c + std::expm1(-2.0 * alpha * c * t) * p;
    if (c > 0.0 ? !(den > 0.0) : !(den < 0.0)) return -1.0;
    r = c * std::exp(-2.0 * alpha * c * t) / den;
  }
  if (!(r > 0.0) || !std::isfinite(r)) return -1.0;
  return std::pow(r, 1.0 / (2.0 * alpha));
}

// ---------------------------------------------------------------------------------------

FlowStepper::FlowStepper(const ProblemSpec& spec, const DiscreteOperators& ops, Scheme scheme,
                         double tau)
    : spec_(spec), ops_(ops), scheme_(scheme), tau_(tau) {
  if (!(tau > 0.0)) throw ConfigError("flow.tau must be > 0");
  spec_.theta = effective_theta(spec);
  switch (scheme_) {
    case Scheme::BF:
      solver_ = ops_.factor_shifted(1.0 / tau_ + spec_.omega + spec_.theta);
      break;
    case Scheme::PGF_BF:
      require_pointwise(ops_, "flow.scheme=pgf_bf");
      solver_ = ops_.factor_shifted(1.0 / tau_ + spec_.omega + spec_.theta);
      break;
    case Scheme::BE:
      if (!(1.0 / tau_ + spec_.omega > 0.0))
        throw ConfigError("flow.scheme=be needs 1/tau + omega > 0");
      break;
    case Scheme::TS: {
      if (!ops_.supports_heat()) throw ConfigError("flow.scheme=ts requires discretization.kind=sp");
      require_pointwise(ops_, "flow.scheme=ts");
      const auto vd = ops_.potential_diagonal();
      const auto md = ops_.mass_diagonal();
      vnodal_.resize(vd.size());
      for (std::size_t i = 0; i < vd.size(); ++i) vnodal_[i] = vd[i] / md[i];
      break;
    }
  }
}

FlowStepper::~FlowStepper() = default;
FlowStepper::FlowStepper(FlowStepper&&) noexcept = default;

double FlowStepper::step(std::span<const double> u, std::span<double> out,
                         std::size_t iteration) const {
  switch (scheme_) {
    case Scheme::BF: return step_bf(u, out, iteration);
    case Scheme::BE: return step_be(u, out, iteration);
    case Scheme::PGF_BF: return step_pgf(u, out, iteration);
    case Scheme::TS: return step_ts(u, out, iteration);
  }
  throw InternalError("unknown scheme");
}

double FlowStepper::finish(std::span<double> out, std::size_t it) const {
  if (!all_finite(out)) throw StepFailure("step produced non-finite values", it);
  if (max_abs(out) == 0.0) throw InternalError("step produced a zero field");
  double lambda;
  try {
    lambda = lambda_omega(out, spec_, ops_);
  } catch (const SpectralConditionError&) {
    throw;
  } catch (const Error& e) {
    throw StepFailure(e.what(), it);
  }
  for (double& x : out) x *= lambda;
  return lambda;
}

void FlowStepper::unprojected_bf(std::span<const double> u, std::span<double> out) const {
  const std::size_t n = u.size();
  std::vector<double> rhs(n), t(n);
  ops_.apply_mass(u, rhs);
  const double a = 1.0 / tau_ + spec_.theta;
  for (std::size_t i = 0; i < n; ++i) rhs[i] *= a;
  ops_.apply_potential(u, t);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= t[i];
  ops_.apply_power(u, spec_.alpha, t);
  for (std::size_t i = 0; i < n; ++i) rhs[i] += t[i];
  const LinearSolver* s = solver_.get();
  std::unique_ptr<LinearSolver> local;
  if (!s || scheme_ != Scheme::BF) {
    local = ops_.factor_shifted(1.0 / tau_ + spec_.omega + spec_.theta);
    s = local.get();
  }
  s->solve(rhs, out);
}

double FlowStepper::step_bf(std::span<const double> u, std::span<double> out,
                            std::size_t it) const {
  unprojected_bf(u, out);
  return finish(out, it);
}

double FlowStepper::step_pgf(std::span<const double> u, std::span<double> out,
                             std::size_t it) const {
  const std::size_t n = u.size();
  const double a = spec_.alpha;
  std::vector<double> hu(n), nu(n), mhu(n), rhs(n), t(n);
  ops_.apply_hamiltonian_strong(u, spec_.omega, hu);
  ops_.apply_power(u, a, nu);
  ops_.apply_mass(hu, mhu);
  const double p = ops_.power_integral(u, 2.0 * a + 2.0);
  if (!(p > 0.0)) throw DomainError("pgf_bf: vanishing L^{2alpha+2} norm");
  const double q = ops_.power_integral(u, 4.0 * a + 2.0);
  const double mu = -(dot(hu, mhu) - (a + 2.0) * dot(hu, nu) + (a + 1.0) * q) / (a * p);

  ops_.apply_mass(u, rhs);
  const double c = 1.0 / tau_ + spec_.theta + mu;
  for (std::size_t i = 0; i < n; ++i) rhs[i] *= c;
  ops_.apply_potential(u, t);
  for (std::size_t i = 0; i < n; ++i) rhs[i] += nu[i] - t[i];
  solver_->solve(rhs, out);
  return finish(out, it);
}

double FlowStepper::step_be(std::span<const double> u, std::span<double> out,
                            std::size_t it) const {
  const std::size_t n = u.size();
  const double c = 1.0 / tau_ + spec_.omega;
  std::vector<double> g(ops_.quadrature_size());
  ops_.sample(u, g);
  for (double& x : g) x = std::pow(std::abs(x), 2.0 * spec_.alpha);

  auto diag = ops_.mass_diagonal();
  const auto kd = ops_.stiffness_diagonal();
  const auto vd = ops_.potential_diagonal();
  const auto gd = ops_.sampled_diagonal(g);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = c * diag[i] + kd[i] + vd[i] - gd[i];
    if (!(diag[i] > 0.0))
      throw StepFailure("be: linearized operator has a nonpositive diagonal entry", it);
  }
  std::vector<double> t(n);
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    ops_.apply_mass(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] *= c;
    ops_.apply_stiffness(x, t);
    for (std::size_t i = 0; i < n; ++i) y[i] += t[i];
    ops_.apply_potential(x, t);
    for (std::size_t i = 0; i < n; ++i) y[i] += t[i];
    ops_.apply_sampled(g, x, t);
    for (std::size_t i = 0; i < n; ++i) y[i] -= t[i];
  };
  auto jacobi = [&](std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  };
  std::vector<double> rhs(n);
  ops_.apply_mass(u, rhs);
  for (double& x : rhs) x /= tau_;
  std::copy(u.begin(), u.end(), out.begin());
  try {
    pcg(apply, jacobi, rhs, out, 1e-12, 10 * n);
  } catch (const NumericalFailure& e) {
    throw StepFailure(std::string("be: linearized system not solvable: ") + e.what(), it);
  }
  return finish(out, it);
}

double FlowStepper::step_ts(std::span<const double> u, std::span<double> out,
                            std::size_t it) const {
  const std::size_t n = u.size();
  std::vector<double> w(n);
  ops_.apply_heat(0.5 * tau_, u, w);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = splitting_nonlinear_ratio(vnodal_[i] + spec_.omega, w[i], spec_.alpha, tau_);
    if (!(f > 0.0)) throw BlowUpError("ts: nonlinear sub-flow blows up within the step", it, i);
    w[i] *= f;
  }
  ops_.apply_heat(0.5 * tau_, w, out);
  return finish(out, it);
}

// ---------------------------------------------------------------------------------------

namespace {

std::pair<Field, double> one_step(const Field& phi, const ProblemSpec& spec,
                                  const DiscreteOperators& ops, Scheme s, double tau) {
  check_field(phi, ops);
  FlowStepper st(spec, ops, s, tau);
  std::vector<double> out(phi.size());
  const double lambda = st.step(phi.values, out, 1);
  return {Field(phi.grid, std::move(out), phi.nonneg_hint && s == Scheme::BF), lambda};
}

}  // namespace

std::pair<Field, double> step_bf(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau) {
  return one_step(phi, spec, ops, Scheme::BF, tau);
}
std::pair<Field, double> step_be(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau) {
  return one_step(phi, spec, ops, Scheme::BE, tau);
}
std::pair<Field, double> step_pgf_bf(const Field& phi, const ProblemSpec& spec,
                                     const DiscreteOperators& ops, double tau) {
  return one_step(phi, spec, ops, Scheme::PGF_BF, tau);
}
std::pair<Field, double> step_ts(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau) {
  return one_step(phi, spec, ops, Scheme::TS, tau);
}

SolveReport run_flow(const Field& seed, const ProblemSpec& spec, const DiscreteOperators& ops,
                     const FlowConfig& cfg) {
  validate(cfg);
  check_field(seed, ops);
  const auto t_start = Clock::now();
  SolveReport rep;

  auto t0 = Clock::now();
  FlowStepper stepper(spec, ops, cfg.scheme, cfg.tau);
  rep.times.factorization = seconds_since(t0);
  rep.theta = stepper.spec().theta;

  t0 = Clock::now();
  std::vector<double> u = project_to_nehari(seed, spec, ops).projected.values;
  std::vector<double> next(u.size()), diff(u.size());
  auto push = [&](std::vector<double>& h, double v) {
    h.push_back(v);
    if (!cfg.record_history && h.size() > 2) h.erase(h.begin());
  };
  push(rep.action_history, functionals(u, spec, ops).action);
  push(rep.lambda_history, 1.0);

  auto check_positivity = [&](std::span<const double> v) {
    const double m = max_abs(v);
    for (double x : v)
      if (x < -1e-12 * m) {
        rep.positivity_violated = true;
        break;
      }
  };
  check_positivity(u);

  for (std::size_t n = 1; n <= cfg.max_iters; ++n) {
    const double lambda = stepper.step(u, next, n);
    for (std::size_t i = 0; i < u.size(); ++i) diff[i] = next[i] - u[i];
    double step;
    if (cfg.stop_norm == StopNorm::Max) {
      step = max_abs(diff) / cfg.tau;
    } else {
      step = std::sqrt(std::max(0.0, ops.dot_mass(diff, diff))) / cfg.tau;
    }
    u.swap(next);
    rep.iterations = n;
    rep.final_step_norm = step;
    push(rep.lambda_history, lambda);
    push(rep.action_history, functionals(u, spec, ops).action);
    push(rep.step_norm_history, step);
    check_positivity(u);
    if (step <= cfg.epsilon) {
      rep.converged = true;
      break;
    }
  }
  rep.times.iteration = seconds_since(t0);
  rep.snls_residual = snls_residual(u, spec, ops).value;
  rep.state = Field(ops.grid_ptr(), std::move(u), seed.nonneg_hint && !rep.positivity_violated);
  rep.wall_time = seconds_since(t_start);
  return rep;
}

double cngf_multiplier(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops) {
  check_field(phi, ops);
  require_pointwise(ops, "cngf_multiplier");
  const std::size_t n = phi.size();
  const double a = spec.alpha;
  std::vector<double> hu(n), nu(n), mhu(n);
  ops.apply_hamiltonian_strong(phi.values, spec.omega, hu);
  ops.apply_power(phi.values, a, nu);
  ops.apply_mass(hu, mhu);
  const double p = ops.power_integral(phi.values, 2.0 * a + 2.0);
  if (!(p > 0.0)) throw DomainError("cngf_multiplier: vanishing L^{2alpha+2} norm");
  const double q = ops.power_integral(phi.values, 4.0 * a + 2.0);
  return -(dot(hu, mhu) - (a + 2.0) * dot(hu, nu) + (a + 1.0) * q) / (a * p);
}

double cngf_multiplier(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops,
                       double tau) {
  check_field(phi, ops);
  require_pointwise(ops, "cngf_multiplier");
  FlowStepper st(spec, ops, Scheme::BF, tau);
  std::vector<double> out(phi.size());
  st.unprojected_bf(phi.values, out);
  return std::log(lambda_omega(out, spec, ops)) / tau;
}

}  // namespace nlsgs
