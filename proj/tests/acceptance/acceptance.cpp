// One line per acceptance criterion; exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "nlsgs/flows.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/nehari.hpp"
#include "nlsgs/oracles.hpp"
#include "nlsgs/spectra.hpp"
#include "nlsgs/sweeps.hpp"

using namespace nlsgs;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

cli::RunConfig config(const std::string& name) {
  return cli::load_config(std::string(NLSGS_CONFIG_DIR) + "/" + name + ".json");
}

double seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SweepResult run_sweep(const cli::RunConfig& c) {
  SweepOptions opt;
  opt.flow = c.flow;
  opt.warm_start = c.sweep->warm_start;
  opt.seed_shifts = c.sweep->seed_shifts;
  opt.margin = c.sweep->margin;
  opt.workers = 4;
  return sweep_omega(c.problem, c.discretization, c.sweep->omegas, opt);
}

ConvergenceResult run_convergence(const cli::RunConfig& c, std::optional<ExactSolution> ex) {
  ConvergenceOptions opt;
  opt.flow = c.flow;
  opt.exact = ex;
  opt.reference_h = c.converge->reference_h;
  return convergence_study(c.problem, c.discretization, c.converge->h_list, opt);
}

// 1 ------------------------------------------------------------------------------------
Outcome oracle_accuracy() {
  const auto c = config("solve_free_soliton");
  const auto t0 = Clock::now();
  const auto ops = assemble(c.problem, c.discretization);
  const auto rep = run_flow(gaussian_seed(c.problem, *ops), c.problem, *ops, c.flow);
  const double wall = seconds(t0);
  const double err = relative_error(rep.state, ExactSolution::free_soliton(1.0, 1.0));
  Outcome o;
  o.pass = rep.converged && err <= 1e-8 && rep.iterations <= 60 && wall < 1.0;
  o.detail = fmt("iterations=%zu rel_err=%.3g wall=%.3fs", rep.iterations, err, wall);
  return o;
}

// 2 ------------------------------------------------------------------------------------
Outcome tau_robustness() {
  Outcome o;
  std::ostringstream d;
  std::vector<ComparisonRequest> bf{{Scheme::BF, {0.01, 0.1, 1, 10, 100, 1000}}};
  bool monotone = true;
  for (const auto& row : compare_schemes(1, bf)) {
    bool ok = row.status == "ok";
    for (std::size_t n = 1; n < row.action_history.size(); ++n)
      ok = ok && row.action_history[n] <= row.action_history[n - 1] + 1e-12;
    monotone = monotone && ok;
  }
  d << "BF action nonincreasing for tau in {0.01..1000}: " << (monotone ? "yes" : "no");
  o.pass = monotone;
  for (int id : {1, 2, 3}) {
    const auto row = compare_schemes(id, {{Scheme::BE, {1.0}}}).front();
    const bool failed = row.status == "step_failure";
    d << "; BE tau=1 case " << id << ": " << row.status;
    if (!failed) d << fmt(" (iters=%zu rel_err=%.2g)", row.iterations, row.rel_err);
    o.pass = o.pass && failed;
  }
  o.detail = d.str();
  return o;
}

// 3 ------------------------------------------------------------------------------------
Outcome ts_order() {
  const std::vector<double> taus{0.1, 0.01, 0.001};
  const std::vector<double> ref{1.63e-3, 1.56e-5, 1.55e-7};
  const auto rows = compare_schemes(1, {{Scheme::TS, taus}});
  Outcome o;
  std::ostringstream d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double ratio = rows[i].rel_err / ref[i];
    o.pass = o.pass && rows[i].status == "ok" && ratio >= 1.0 / 3 && ratio <= 3.0;
    d << fmt("%stau=%g err=%.3g (x%.2f)", i ? "; " : "", taus[i], rows[i].rel_err, ratio);
  }
  const double order = std::log10(rows[0].rel_err / rows[2].rel_err) / 2.0;
  o.pass = o.pass && std::abs(order - 2.0) < 0.2;
  d << fmt("; fitted order %.3f", order);
  o.detail = d.str();
  return o;
}

// 4 ------------------------------------------------------------------------------------
Outcome delta_oracle() {
  const auto c = config("oracle_delta");
  const auto ops = assemble(c.problem, c.discretization);
  const auto rep = run_flow(gaussian_seed(c.problem, *ops), c.problem, *ops, c.flow);
  const auto ex = ExactSolution::delta_ground_state(1.0, 1.0, 1.0);
  const double err = relative_error(rep.state, ex);
  const auto cv = run_convergence(config("converge_delta_fe2"), ex);
  Outcome o;
  o.pass = rep.converged && err <= 1e-4 && std::abs(cv.fitted_order_L2 - 3.0) <= 0.3 &&
           std::abs(cv.fitted_order_H1 - 2.0) <= 0.3;
  o.detail = fmt("rel_err=%.3g; quadratic elements L2 order %.3f, H1 order %.3f", err,
                 cv.fitted_order_L2, cv.fitted_order_H1);
  return o;
}

// 5 ------------------------------------------------------------------------------------
Outcome inverse_power_orders() {
  Outcome o;
  std::ostringstream d;
  for (int p : {1, 2}) {
    const auto cv = run_convergence(config("converge_inverse_power_fe" + std::to_string(p)), {});
    o.pass = o.pass && std::abs(cv.fitted_order_H1 - 1.0) <= 0.2 &&
             std::abs(cv.fitted_order_L2 - 2.0) <= 0.3;
    d << fmt("%sP%d: H1 %.3f, L2 %.3f", p == 1 ? "" : "; ", p, cv.fitted_order_H1,
             cv.fitted_order_L2);
  }
  o.detail = d.str();
  return o;
}

// 6 ------------------------------------------------------------------------------------
Outcome omega0_values() {
  const std::vector<std::pair<std::string, double>> table{
      {"sweep_inverse_power_case1", 1.6535}, {"sweep_inverse_power_case2", 1.0000},
      {"sweep_inverse_power_case3", 0.2986}, {"sweep_well_case1", 1.6685},
      {"sweep_well_case2", 1.2433},          {"sweep_well_case3", 0.7544},
      {"sweep_double_well_1d", 0.4277},      {"sweep_cosine_gaussian_2d", 0.4652}};
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, ref] : table) {
    const auto c = config(name);
    const auto ops = assemble(c.problem, c.discretization);
    const double w0 = compute_omega0(c.problem, *ops).omega0;
    worst = std::max(worst, std::abs(w0 - ref));
  }
  o.pass = worst <= 2e-3;
  o.detail = fmt("8 constants, max |omega0 - reference| = %.2g", worst);
  return o;
}

// 7 ------------------------------------------------------------------------------------
Outcome analytic_sweep() {
  const auto res = run_sweep(config("sweep_free_soliton"));
  Outcome o;
  double worst = 0.0;
  for (const auto& r : res.rows) {
    o.pass = o.pass && r.converged;
    worst = std::max(worst, std::abs(r.M_g / (4.0 * std::sqrt(r.omega)) - 1.0));
    worst = std::max(worst, std::abs(r.S_g / (8.0 / 3.0 * std::pow(r.omega, 1.5)) - 1.0));
  }
  o.pass = o.pass && res.rows.size() == 5 && worst <= 1e-6;
  o.detail = fmt("%zu rows, max relative deviation %.2g", res.rows.size(), worst);
  return o;
}

// 8 ------------------------------------------------------------------------------------
Field random_field(const DiscreteOperators& ops, std::mt19937_64& rng, bool nonneg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Bump { double c, w, a; };
  std::vector<Bump> b(4);
  for (auto& x : b) x = {4.0 * u(rng), 0.5 + 1.5 * std::abs(u(rng)), nonneg ? 0.1 + std::abs(u(rng)) : u(rng)};
  Field f(ops.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = ops.grid().point(i)[0];
    for (const auto& k : b) f.values[i] += k.a * std::exp(-(x - k.c) * (x - k.c) / (2 * k.w * k.w));
  }
  return f;
}

Outcome invariant_suites() {
  std::ostringstream d;
  bool all = true;
  auto part = [&](const char* tag, bool ok, const std::string& info) {
    all = all && ok;
    d << (d.tellp() > 0 ? "; " : "") << tag << (ok ? " ok" : " FAIL") << info;
  };
  std::mt19937_64 rng(8);

  ProblemSpec dspec;
  dspec.alpha = 1.0;
  dspec.omega = 1.0;
  dspec.box = {Interval{-16.0, 16.0}};
  dspec.potential = DeltaSum{{DeltaSite{0.0, 1.0}}};
  const auto dops = assemble(dspec, {Method::FE, 0.0625, 2, false});

  // (a) projection idempotence and ray uniqueness
  double worst_a = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto phi = random_field(*dops, rng, t % 2 == 0);
    const auto p = project_to_nehari(phi, dspec, *dops).projected;
    const auto pp = project_to_nehari(p, dspec, *dops).projected;
    Field s = phi;
    for (auto& v : s.values) v *= 0.1 + 10.0 * (t + 1) / 100.0;
    const auto ps = project_to_nehari(s, dspec, *dops).projected;
    const double scale = std::max(1.0, max_abs(p.values));
    worst_a = std::max({worst_a, max_abs_diff(pp.values, p.values) / scale,
                        max_abs_diff(ps.values, p.values) / scale});
  }
  part("(a)", worst_a <= 1e-12, fmt(" %.1e", worst_a));

  // (b) I_ω(φⁿ) = 0 along every scheme
  const auto cc = comparison_case(1);
  const auto cops = assemble(cc.spec, cc.disc);
  double worst_b = 0.0;
  for (Scheme sc : {Scheme::BF, Scheme::BE, Scheme::PGF_BF, Scheme::TS}) {
    FlowStepper st(cc.spec, *cops, sc, 0.05);
    std::vector<double> u = gaussian_seed(cc.spec, *cops).values, v(u.size());
    for (std::size_t n = 1; n <= 20; ++n) {
      st.step(u, v, n);
      const auto r = functionals(v, cc.spec, *cops);
      worst_b = std::max(worst_b, std::abs(r.nehari) / r.quadratic);
      u.swap(v);
    }
  }
  part("(b)", worst_b <= 1e-12, fmt(" %.1e", worst_b));

  // (c) identities
  double worst_c = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto phi = random_field(*dops, rng, false);
    const auto r = functionals(phi, dspec, *dops);
    const double a = dspec.alpha;
    const double s = std::abs(r.action) + std::abs(r.nehari) + std::abs(r.quadratic);
    worst_c = std::max(worst_c, std::abs(r.action - r.nehari / (a + 1) - a * r.quadratic / (a + 1)) / s);
    worst_c = std::max(worst_c, std::abs(r.nehari - r.quadratic + r.lp_norm_pow) / s);
  }
  part("(c)", worst_c <= 1e-12, fmt(" %.1e", worst_c));

  // (d) positivity under FD2
  ProblemSpec gspec = dspec;
  gspec.potential = GaussianWell{1.0};
  const auto gops = assemble(gspec, {Method::FD2, 0.125, 1, false});
  double worst_d = 0.0;
  for (int t = 0; t < 50; ++t) {
    FlowStepper st(gspec, *gops, Scheme::BF, std::pow(10.0, -2.0 + (t % 5)));
    std::vector<double> u = project_to_nehari(random_field(*gops, rng, true), gspec, *gops).projected.values;
    std::vector<double> v(u.size());
    for (std::size_t n = 1; n <= 20; ++n) {
      st.step(u, v, n);
      for (double x : v) worst_d = std::max(worst_d, -x / max_abs(v));
      u.swap(v);
    }
  }
  part("(d)", worst_d <= 1e-14, fmt(" %.1e", worst_d));

  // (e) fixed point: projected oracle moves by < 1e-6 per step
  const auto ex = sample(ExactSolution::free_soliton(1.0, 1.0), cops->grid_ptr());
  auto phi = project_to_nehari(ex, cc.spec, *cops).projected;
  double worst_e = 0.0;
  for (int n = 0; n < 5; ++n) {
    auto next = step_bf(phi, cc.spec, *cops, 4.0).first;
    worst_e = std::max(worst_e, max_abs_diff(next.values, phi.values));
    phi = std::move(next);
  }
  part("(e)", worst_e < 1e-6, fmt(" %.1e", worst_e));

  return {all, d.str()};
}

// 9 ------------------------------------------------------------------------------------
Outcome stability() {
  const auto sup = stability_diagnostic(run_sweep(config("stability_d3_supercritical")));
  const auto sub = stability_diagnostic(run_sweep(config("stability_d1_subcritical")));
  Outcome o;
  o.pass = sup.unique_sign_change() && !sub.sign_change();
  o.detail = fmt("d=3: %zu sign change(s)%s; d=1: %zu sign change(s)", sup.omega_c.size(),
                 sup.omega_c.empty() ? "" : fmt(" at omega_c=%.4f", sup.omega_c[0]).c_str(),
                 sub.omega_c.size());
  return o;
}

// 10 -----------------------------------------------------------------------------------
Outcome correspondence() {
  const auto c = config("crosscheck_2d");
  CrosscheckOptions opt;
  opt.energy_tau = c.crosscheck->energy_tau;
  opt.energy_epsilon = c.crosscheck->energy_epsilon;
  opt.energy_max_iters = c.crosscheck->energy_max_iters;
  opt.stabilization = c.crosscheck->stabilization;
  opt.action_flow = c.flow;
  opt.seed_shifts = c.crosscheck->seed_shifts;
  const auto t0 = Clock::now();
  const auto rows = least_energy_crosscheck(c.problem, c.discretization, c.crosscheck->masses, opt);
  Outcome o;
  std::ostringstream d;
  for (const auto& r : rows) {
    o.pass = o.pass && r.error.empty() && r.rel_diff <= 1e-2;
    d << fmt("m=%.2f: omega=%.4f rel_diff=%.1e; ", r.m, r.omega, r.rel_diff);
  }
  d << fmt("wall=%.0fs", seconds(t0));
  o.detail = d.str();
  return o;
}

// timing order -------------------------------------------------------------------------
Outcome timing_order() {
  auto best = [](Scheme s, double tau) {
    double t = 1e300;
    for (int rep = 0; rep < 3; ++rep) t = std::min(t, compare_schemes(1, {{s, {tau}}}).front().wall_s);
    return t;
  };
  Outcome o;
  std::ostringstream d;
  for (double tau : {0.01, 0.1}) {
    const double bf = best(Scheme::BF, tau), pgf = best(Scheme::PGF_BF, tau), be = best(Scheme::BE, tau);
    const double ratio = std::max(bf, pgf) / std::min(bf, pgf);
    o.pass = o.pass && ratio <= 2.0 && be > bf;
    d << fmt("%stau=%g: BF %.4fs, PGF %.4fs (x%.2f), BE %.4fs", tau == 0.01 ? "" : "; ", tau, bf, pgf,
             ratio, be);
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle accuracy (BF, case I)", oracle_accuracy},
      {"2 tau robustness (BF monotone, BE step failures)", tau_robustness},
      {"3 splitting order", ts_order},
      {"4 delta oracle and quadratic-element orders", delta_oracle},
      {"5 inverse-power convergence orders", inverse_power_orders},
      {"6 omega0 reference values", omega0_values},
      {"7 analytic sweep", analytic_sweep},
      {"8 invariant suites", invariant_suites},
      {"9 stability diagnostic", stability},
      {"10 least energy / least action round trip", correspondence},
      {"timing order (BF ~ PGF, BE slower)", timing_order},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu checks failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
