#include "nlsgs/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <functional>
#include <thread>

#include "nlsgs/errors.hpp"
#include "nlsgs/format.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/nehari.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/quadrature.hpp"
#include "nlsgs/serialize.hpp"
#include "nlsgs/spectra.hpp"

namespace nlsgs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string seed_label(const std::vector<double>& shift) {
  if (shift.empty() || std::all_of(shift.begin(), shift.end(), [](double s) { return s == 0.0; }))
    return "centered";
  std::string s = "shift(";
  for (std::size_t i = 0; i < shift.size(); ++i) {
    if (i) s += ";";
    s += format_double(shift[i]);
  }
  return s + ")";
}

struct SeedOutcome {
  std::optional<SolveReport> report;
  FunctionalReport f;
  double residual = kNaN;
  std::string error;
};

SeedOutcome run_seed(const Field& seed, const ProblemSpec& spec, const DiscreteOperators& ops,
                     const FlowConfig& cfg) {
  SeedOutcome out;
  try {
    auto rep = run_flow(seed, spec, ops, cfg);
    out.f = functionals(rep.state, spec, ops);
    out.residual = rep.snls_residual;
    out.report = std::move(rep);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

// Lower action among converged outcomes, falling back to any finished run.
std::size_t pick(const std::vector<SeedOutcome>& outs) {
  std::size_t best = outs.size();
  auto better = [&](std::size_t i) {
    if (!outs[i].report) return false;
    if (best == outs.size()) return true;
    const bool ci = outs[i].report->converged, cb = outs[best].report->converged;
    if (ci != cb) return ci;
    return outs[i].f.action < outs[best].f.action;
  };
  for (std::size_t i = 0; i < outs.size(); ++i)
    if (better(i)) best = i;
  return best;
}

SweepRow make_row(double omega, const std::vector<SeedOutcome>& outs,
                  const std::vector<std::string>& labels, std::size_t& chosen) {
  SweepRow row;
  row.omega = omega;
  chosen = pick(outs);
  if (chosen == outs.size()) {
    row.S_g = row.M_g = row.E_g = row.mu_g = row.residual = kNaN;
    for (const auto& o : outs) {
      if (!row.error.empty()) row.error += "; ";
      row.error += o.error;
    }
    return row;
  }
  const auto& o = outs[chosen];
  row.S_g = o.f.action;
  row.M_g = o.f.mass;
  row.E_g = o.f.energy;
  row.mu_g = o.f.mu_g;
  row.iterations = o.report->iterations;
  row.residual = o.residual;
  row.converged = o.report->converged;
  row.seed = labels[chosen];
  return row;
}

}  // namespace

SweepResult sweep_omega(const ProblemSpec& tmpl, const DiscretizationSpec& disc,
                        const std::vector<double>& omegas, const SweepOptions& opt) {
  validate(opt.flow);
  validate(tmpl);
  if (omegas.empty()) throw ContractViolation("sweep: empty omega list");
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (!(omegas[i] > omegas[i - 1]))
      throw ContractViolation("sweep: omega list must be strictly increasing (entry " +
                              std::to_string(i) + ")");

  const auto ops = assemble(tmpl, disc);
  SweepResult res;
  res.omega0 = opt.omega0 ? *opt.omega0 : compute_omega0(tmpl, *ops).omega0;
  for (double w : omegas)
    if (w < res.omega0 + opt.margin)
      throw SpectralConditionError("sweep: omega = " + format_double(w) +
                                   " is below omega0 + margin = " +
                                   format_double(res.omega0 + opt.margin));

  std::vector<std::vector<double>> shifts(1);
  for (const auto& sh : opt.seed_shifts)
    if (seed_label(sh) != "centered") shifts.push_back(sh);
  std::vector<std::string> labels;
  for (const auto& s : shifts) labels.push_back(seed_label(s));

  const std::size_t n = omegas.size();
  res.rows.resize(n);
  if (opt.keep_states) res.states.resize(n);

  auto spec_at = [&](double w) {
    ProblemSpec s = tmpl;
    s.omega = w;
    return s;
  };
  auto cold = [&](std::size_t i) {
    const ProblemSpec s = spec_at(omegas[i]);
    std::vector<SeedOutcome> outs;
    for (const auto& sh : shifts) {
      try {
        outs.push_back(run_seed(gaussian_seed(s, *ops, sh), s, *ops, opt.flow));
      } catch (const Error& e) {
        SeedOutcome o;
        o.error = e.what();
        outs.push_back(std::move(o));
      }
    }
    std::size_t chosen = 0;
    res.rows[i] = make_row(omegas[i], outs, labels, chosen);
    if (opt.keep_states && chosen < outs.size()) res.states[i] = outs[chosen].report->state;
  };

  if (!opt.warm_start) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(opt.workers, n));
    if (workers == 1) {
      for (std::size_t i = 0; i < n; ++i) cold(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < n; i = next++) cold(i);
        });
      for (auto& th : pool) th.join();
    }
  } else {
    // One warm chain per seed, so a shifted branch keeps following its own state.
    std::vector<std::optional<Field>> prev(shifts.size());
    for (std::size_t i = 0; i < n; ++i) {
      const ProblemSpec s = spec_at(omegas[i]);
      std::vector<SeedOutcome> outs;
      for (std::size_t k = 0; k < shifts.size(); ++k) {
        SeedOutcome o;
        try {
          const Field seed = prev[k] ? *prev[k] : gaussian_seed(s, *ops, shifts[k]);
          o = run_seed(seed, s, *ops, opt.flow);
        } catch (const Error& e) {
          o.error = e.what();
        }
        if (o.report && all_finite(o.report->state.values))
          prev[k] = o.report->state;
        else
          prev[k].reset();
        outs.push_back(std::move(o));
      }
      std::size_t chosen = 0;
      res.rows[i] = make_row(omegas[i], outs, labels, chosen);
      if (opt.keep_states && chosen < outs.size()) res.states[i] = outs[chosen].report->state;
    }
  }

  res.metadata = {
      {"spec", to_json(tmpl)},
      {"spec_digest", digest(to_json(tmpl))},
      {"discretization", to_json(disc)},
      {"flow", to_json(opt.flow)},
      {"omega0", res.omega0},
      {"warm_start", opt.warm_start},
      {"seeds", labels},
  };
  return res;
}

std::string sweep_csv_header() { return "omega,S_g,M_g,E_g,mu_g,iters,residual"; }

std::string to_csv_row(const SweepRow& r) {
  return join_csv({r.omega, r.S_g, r.M_g, r.E_g, r.mu_g}) + "," +
         std::to_string(r.iterations) + "," + format_double(r.residual);
}

// ---------------------------------------------------------------------------------------

StabilityDiagnostic stability_diagnostic(const SweepResult& sweep) {
  const auto& rows = sweep.rows;
  if (rows.size() < 3) throw ContractViolation("stability diagnostic needs at least 3 rows");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].omega > rows[i - 1].omega))
      throw ContractViolation("stability diagnostic: omega grid is not increasing at row " +
                              std::to_string(i));
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!std::isfinite(rows[i].M_g))
      throw ContractViolation("stability diagnostic: row " + std::to_string(i) +
                              " has no mass value");

  StabilityDiagnostic d;
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    d.omega.push_back(rows[i].omega);
    d.slope.push_back((rows[hi].M_g - rows[lo].M_g) / (rows[hi].omega - rows[lo].omega));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = d.slope[i], b = d.slope[i + 1];
    if (a > 0.0 && b <= 0.0) {
      const double t = a / (a - b);
      d.omega_c.push_back(d.omega[i] + t * (d.omega[i + 1] - d.omega[i]));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------------------

namespace {

struct Errors {
  double l2 = 0.0;
  double h1 = 0.0;
};

using Eval = std::function<double(double)>;

// ∫ over the cells of a uniform partition with 6-point Gauss per cell.
Errors integrate_errors(const Axis& cells, const DiscreteOperators& ops, const Eval& e,
                        const Eval& de) {
  static const QuadratureRule g6 = gauss_legendre01(6);
  double l2 = 0.0, semi = 0.0;
  const double hh = cells.h();
  for (int c = 0; c < cells.intervals; ++c) {
    const double x0 = cells.a + c * hh;
    for (std::size_t q = 0; q < g6.nodes.size(); ++q) {
      const double x = x0 + g6.nodes[q] * hh;
      const double w = g6.weights[q] * hh * ops.measure(x);
      const double ev = e(x), dv = de(x);
      l2 += w * ev * ev;
      semi += w * dv * dv;
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

// Nodal discrete norms with trapezoid weights and forward differences (FD and SP).
Errors nodal_errors(const DiscreteOperators& ops, std::span<const double> u, const Eval& ref) {
  const auto& g = ops.grid();
  const Axis& ax = g.axes()[0];
  const double dx = g.node_spacing(0);
  const int nodes = ax.intervals + 1;
  std::vector<double> err(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double x = ax.a + k * dx;
    const double uh = (k == 0 || k == nodes - 1) ? 0.0 : u[k - 1];
    err[k] = uh - ref(x);
  }
  double l2 = 0.0, semi = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double w = (k == 0 || k == nodes - 1) ? 0.5 * dx : dx;
    l2 += w * err[k] * err[k];
  }
  for (int k = 0; k + 1 < nodes; ++k) {
    const double d = (err[k + 1] - err[k]) / dx;
    semi += dx * d * d;
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(e[i] > 0.0) || !std::isfinite(e[i])) continue;
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return kNaN;
  const double den = m * sxx - sx * sx;
  return den == 0.0 ? kNaN : (m * sxy - sx * sy) / den;
}

}  // namespace

ConvergenceResult convergence_study(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                    const std::vector<double>& h_list,
                                    const ConvergenceOptions& opt) {
  validate(opt.flow);
  validate(spec);
  if (spec.geometry == Geometry::Tensor2D)
    throw ConfigError("convergence study: 1D and radial geometries only");
  if (h_list.size() < 2) throw ConfigError("convergence study: h_list needs at least 2 entries");
  std::vector<double> hs = h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (!(hs[i] < hs[i - 1])) throw ConfigError("convergence study: duplicate h in h_list");

  auto solve = [&](double h) {
    DiscretizationSpec d = disc;
    d.h = h;
    auto ops = assemble(spec, d);
    auto rep = run_flow(gaussian_seed(spec, *ops), spec, *ops, opt.flow);
    return std::make_pair(ops, std::move(rep));
  };

  ConvergenceResult res;
  const bool fe = disc.method == Method::FE;

  OperatorsPtr ref_ops;
  std::vector<double> ref_u;
  if (opt.exact) {
    res.reference = "exact:" + opt.exact->name();
  } else {
    const double href = opt.reference_h > 0.0 ? opt.reference_h : hs.back() / 16.0;
    for (double h : hs) {
      const double r = h / href;
      if (std::abs(r - std::round(r)) > 1e-9 * r || std::round(r) < 2.0)
        throw ConfigError("convergence study: h = " + format_double(h) +
                          " is not nested in the reference spacing " + format_double(href));
    }
    auto [o, rep] = solve(href);
    ref_ops = o;
    ref_u = std::move(rep.state.values);
    res.reference = "self:h=" + format_double(href);
  }

  std::vector<double> l2s, h1s;
  for (double h : hs) {
    auto [ops, rep] = solve(h);
    const std::span<const double> u = rep.state.values;
    Errors err;
    if (fe) {
      Eval e, de;
      if (opt.exact) {
        const auto& ex = *opt.exact;
        e = [&](double x) { return ops->value_at(u, x) - ex.value(x); };
        de = [&](double x) { return ops->derivative_at(u, x) - ex.derivative(x); };
        err = integrate_errors(ops->grid().axes()[0], *ops, e, de);
      } else {
        e = [&](double x) { return ops->value_at(u, x) - ref_ops->value_at(ref_u, x); };
        de = [&](double x) { return ops->derivative_at(u, x) - ref_ops->derivative_at(ref_u, x); };
        err = integrate_errors(ref_ops->grid().axes()[0], *ref_ops, e, de);
      }
    } else if (opt.exact) {
      const auto& ex = *opt.exact;
      err = nodal_errors(*ops, u, [&](double x) { return ex.value(x); });
    } else {
      err = nodal_errors(*ops, u, [&](double x) { return ref_ops->value_at(ref_u, x); });
    }
    ConvergenceRow row;
    row.h = h;
    row.L2 = err.l2;
    row.H1 = err.h1;
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    if (res.rows.empty()) {
      row.order_L2 = row.order_H1 = kNaN;
    } else {
      const auto& p = res.rows.back();
      const double lh = std::log(p.h / h);
      row.order_L2 = std::log(p.L2 / row.L2) / lh;
      row.order_H1 = std::log(p.H1 / row.H1) / lh;
    }
    res.rows.push_back(row);
    l2s.push_back(row.L2);
    h1s.push_back(row.H1);
  }
  res.fitted_order_L2 = fit_slope(hs, l2s);
  res.fitted_order_H1 = fit_slope(hs, h1s);
  return res;
}

std::string convergence_csv_header() { return "h,L2,H1,order_L2,order_H1"; }

std::string to_csv_row(const ConvergenceRow& r) {
  return join_csv({r.h, r.L2, r.H1, r.order_L2, r.order_H1});
}

// ---------------------------------------------------------------------------------------

ComparisonCase comparison_case(int id) {
  ComparisonCase c;
  c.spec.alpha = 1.0;
  c.spec.dim = 1;
  c.spec.geometry = Geometry::Full1D;
  c.spec.potential = ZeroPotential{};
  c.disc.method = Method::SP;
  c.disc.h = 1.0 / 16.0;
  switch (id) {
    case 1: c.spec.omega = 1.0; c.spec.box = {Interval{-32.0, 32.0}}; break;
    case 2: c.spec.omega = 0.1; c.spec.box = {Interval{-64.0, 64.0}}; break;
    case 3: c.spec.omega = 10.0; c.spec.box = {Interval{-16.0, 16.0}}; break;
    default: throw ConfigError("compare: case must be 1, 2 or 3 (got " + std::to_string(id) + ")");
  }
  return c;
}

std::vector<ComparisonRow> compare_schemes(int case_id, const std::vector<ComparisonRequest>& runs,
                                           std::size_t max_iters) {
  const ComparisonCase cc = comparison_case(case_id);
  const auto ops = assemble(cc.spec, cc.disc);
  const auto exact = ExactSolution::free_soliton(cc.spec.alpha, cc.spec.omega);
  const Field seed = gaussian_seed(cc.spec, *ops);

  std::vector<ComparisonRow> rows;
  for (const auto& req : runs) {
    for (double tau : req.taus) {
      FlowConfig cfg;
      cfg.scheme = req.scheme;
      cfg.tau = tau;
      cfg.epsilon = cc.epsilon;
      cfg.max_iters = max_iters;
      cfg.record_history = true;
      validate(cfg);

      ComparisonRow row;
      row.scheme = req.scheme;
      row.tau = tau;
      row.rel_err = kNaN;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto rep = run_flow(seed, cc.spec, *ops, cfg);
        row.iterations = rep.iterations;
        row.rel_err = relative_error(rep.state, exact);
        row.status = rep.converged ? "ok" : "not_converged";
        row.action_history = std::move(rep.action_history);
      } catch (const BlowUpError& e) {
        row.status = "blow_up";
        row.iterations = e.iteration();
        row.message = e.what();
      } catch (const StepFailure& e) {
        row.status = "step_failure";
        row.iterations = e.iteration();
        row.message = e.what();
      } catch (const NumericalFailure& e) {
        row.status = "step_failure";
        row.message = e.what();
      }
      row.wall_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string comparison_csv_header() { return "scheme,tau,wall_s,iters,rel_err,status"; }

std::string to_csv_row(const ComparisonRow& r) {
  return to_string(r.scheme) + "," + join_csv({r.tau, r.wall_s}) + "," +
         std::to_string(r.iterations) + "," + format_double(r.rel_err) + "," + r.status;
}

// ---------------------------------------------------------------------------------------

EnergyGroundState least_energy_state(const ProblemSpec& spec, const DiscreteOperators& ops,
                                     double mass, const CrosscheckOptions& opt,
                                     const std::vector<double>& shift) {
  if (!(mass > 0.0)) throw DomainError("least energy state: mass must be positive");
  if (!(opt.energy_tau > 0.0) || !(opt.stabilization >= 0.0))
    throw ConfigError("least energy state: tau must be positive and the shift nonnegative");
  double c = 1.0 / opt.energy_tau + opt.stabilization;
  auto solver = ops.factor_shifted(c);
  const std::size_t n = ops.size();

  auto rescale = [&](std::vector<double>& v) {
    const double m = ops.dot_mass(v, v);
    if (!(m > 0.0) || !std::isfinite(m)) throw NumericalFailure("least energy flow lost its mass");
    const double s = std::sqrt(mass / m);
    for (auto& x : v) x *= s;
  };

  EnergyGroundState out;
  std::vector<double> u = gaussian_seed(spec, ops, shift).values;
  rescale(u);
  std::vector<double> rhs(n), mu(n), vu(n), nu(n), ku(n), next(n);
  for (std::size_t it = 1; it <= opt.energy_max_iters; ++it) {
    ops.apply_mass(u, mu);
    ops.apply_potential(u, vu);
    ops.apply_power(u, spec.alpha, nu);
    ops.apply_stiffness(u, ku);
    // Explicit Lagrange multiplier: without it the rescaled fixed point is not a critical point.
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += u[i] * (ku[i] + vu[i] - nu[i]);
    const double lag = num / mass;
    // keep the shifted step a contraction once -lag outgrows the shift
    if (c + lag < 1.0 / opt.energy_tau) {
      c = 1.0 / opt.energy_tau + opt.stabilization - lag;
      solver = ops.factor_shifted(c);
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] = (c + lag) * mu[i] - vu[i] + nu[i];
    solver->solve(rhs, next);
    rescale(next);
    const double diff = max_abs_diff(next, u) / opt.energy_tau;
    u.swap(next);
    out.iterations = it;
    if (diff <= opt.energy_epsilon) {
      out.converged = true;
      break;
    }
  }
  out.state = Field(ops.grid_ptr(), std::move(u));
  out.mu_g = functionals(out.state, spec, ops).mu_g;
  return out;
}

std::vector<CrosscheckRow> least_energy_crosscheck(const ProblemSpec& tmpl,
                                                   const DiscretizationSpec& disc,
                                                   const std::vector<double>& masses,
                                                   const CrosscheckOptions& opt) {
  validate(tmpl);
  validate(opt.action_flow);
  const auto ops = assemble(tmpl, disc);
  std::vector<std::vector<double>> shifts(1);
  for (const auto& sh : opt.seed_shifts)
    if (seed_label(sh) != "centered") shifts.push_back(sh);
  std::vector<std::string> labels;
  for (const auto& sh : shifts) labels.push_back(seed_label(sh));
  std::vector<CrosscheckRow> rows;
  for (double m : masses) {
    CrosscheckRow row;
    row.m = m;
    row.mu_g = row.omega = row.M_g = row.rel_diff = kNaN;
    try {
      std::optional<EnergyGroundState> eg;
      double best_e = 0.0;
      for (std::size_t k = 0; k < shifts.size(); ++k) {
        auto cand = least_energy_state(tmpl, *ops, m, opt, shifts[k]);
        const double e = functionals(cand.state, tmpl, *ops).energy;
        if (!eg || (cand.converged && !eg->converged) ||
            (cand.converged == eg->converged && e < best_e)) {
          best_e = e;
          eg = std::move(cand);
          row.energy_seed = labels[k];
        }
      }
      row.mu_g = eg->mu_g;
      row.energy_iterations = eg->iterations;
      row.energy_converged = eg->converged;
      row.omega = -eg->mu_g;
      ProblemSpec s = tmpl;
      s.omega = row.omega;
      std::optional<SolveReport> best;
      double best_s = 0.0;
      for (std::size_t k = 0; k < shifts.size(); ++k) {
        auto rep = run_flow(gaussian_seed(s, *ops, shifts[k]), s, *ops, opt.action_flow);
        const double a = functionals(rep.state, s, *ops).action;
        if (!best || (rep.converged && !best->converged) ||
            (rep.converged == best->converged && a < best_s)) {
          best_s = a;
          best = std::move(rep);
          row.action_seed = labels[k];
        }
      }
      row.action_iterations = best->iterations;
      row.action_converged = best->converged;
      row.M_g = functionals(best->state, s, *ops).mass;
      row.rel_diff = std::abs(row.M_g - m) / m;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string crosscheck_csv_header() { return "m,mu_g,omega,M_g,rel_diff"; }

std::string to_csv_row(const CrosscheckRow& r) {
  return join_csv({r.m, r.mu_g, r.omega, r.M_g, r.rel_diff});
}

}  // namespace nlsgs
