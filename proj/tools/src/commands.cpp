#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "nlsgs/errors.hpp"
#include "nlsgs/format.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/io.hpp"
#include "nlsgs/nehari.hpp"
#include "nlsgs/oracles.hpp"
#include "nlsgs/serialize.hpp"
#include "nlsgs/spectra.hpp"
#include "nlsgs/sweeps.hpp"

namespace nlsgs::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Non-finite numbers become null so the JSON stays valid.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Context {
  RunConfig& cfg;
  const Overrides& ov;
  std::ostream& out;

  std::string dir() const { return ov.output_dir.empty() ? cfg.outputs.directory : ov.output_dir; }
  std::string path(const std::string& name) const {
    return (std::filesystem::path(dir()) / name).string();
  }
  void write_json(const std::string& name, const json& j) const {
    if (!cfg.outputs.json) return;
    auto os = open_output(path(name));
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing " + path(name));
  }
  template <class Fn>
  void write_csv(const std::string& name, Fn&& body) const {
    if (!cfg.outputs.csv) return;
    auto os = open_output(path(name));
    body(os);
    if (!os) throw IoError("failed writing " + path(name));
  }
};

void require_problem(const RunConfig& cfg, const std::string& cmd) {
  if (!cfg.has_problem)
    throw ConfigError(cmd + ": missing config keys problem and discretization");
}

std::optional<ExactSolution> exact_for(const ProblemSpec& spec) {
  if (spec.geometry != Geometry::Full1D) return std::nullopt;
  if (std::holds_alternative<ZeroPotential>(spec.potential))
    return ExactSolution::free_soliton(spec.alpha, spec.omega);
  if (const auto* d = std::get_if<DeltaSum>(&spec.potential)) {
    if (d->sites.size() == 1 && d->sites[0].center == 0.0)
      return ExactSolution::delta_ground_state(spec.alpha, spec.omega, d->sites[0].strength);
  }
  return std::nullopt;
}

Field make_seed(const RunConfig& cfg, const DiscreteOperators& ops) {
  const auto& s = cfg.seed;
  if (s.kind == "file") return read_field_csv(s.path, ops.grid_ptr());
  if (s.kind == "exact") {
    const auto ex = exact_for(cfg.problem);
    if (!ex) throw ConfigError("seed.kind=exact: no closed-form solution for this problem");
    return sample(*ex, ops.grid_ptr());
  }
  return gaussian_seed(cfg.problem, ops, s.shift);
}

json timing_json(double assembly, double omega0, const PhaseTimes& t, double wall) {
  return {{"assembly_s", assembly},
          {"omega0_s", omega0},
          {"factorization_s", t.factorization},
          {"iteration_s", t.iteration},
          {"wall_s", wall}};
}

// Assembles, checks the spectral condition and runs the configured flow.
struct Solved {
  OperatorsPtr ops;
  SolveReport rep;
  double omega0 = 0.0;
  double assembly_s = 0.0;
  double omega0_s = 0.0;
};

Solved solve_problem(const RunConfig& cfg) {
  Solved s;
  auto t0 = Clock::now();
  s.ops = assemble(cfg.problem, cfg.discretization);
  s.assembly_s = seconds_since(t0);
  t0 = Clock::now();
  s.omega0 = compute_omega0(cfg.problem, *s.ops).omega0;
  s.omega0_s = seconds_since(t0);
  check_spectral_condition(cfg.problem, s.omega0);
  s.rep = run_flow(make_seed(cfg, *s.ops), cfg.problem, *s.ops, cfg.flow);
  return s;
}

json metadata(const RunConfig& cfg) {
  return {{"spec", to_json(cfg.problem)},
          {"spec_digest", digest(to_json(cfg.problem))},
          {"discretization", to_json(cfg.discretization)},
          {"flow", to_json(cfg.flow)}};
}

int cmd_solve(Context& c) {
  require_problem(c.cfg, "solve");
  const auto s = solve_problem(c.cfg);
  const auto f = functionals(s.rep.state, c.cfg.problem, *s.ops);

  const std::string field = c.ov.field_out.empty() ? c.path("field.csv") : c.ov.field_out;
  const std::string hist = c.ov.history_out.empty() ? c.path("history.csv") : c.ov.history_out;
  if (c.cfg.outputs.csv || !c.ov.field_out.empty()) write_field_csv(field, s.rep.state);
  if (c.cfg.outputs.csv || !c.ov.history_out.empty()) write_history_csv(hist, s.rep);
  json j = metadata(c.cfg);
  j["omega0"] = s.omega0;
  j["converged"] = s.rep.converged;
  j["iterations"] = s.rep.iterations;
  j["final_step_norm"] = num(s.rep.final_step_norm);
  j["snls_residual"] = num(s.rep.snls_residual);
  j["positivity_violated"] = s.rep.positivity_violated;
  j["theta"] = s.rep.theta;
  j["functionals"] = to_json(f);
  j["timing"] = timing_json(s.assembly_s, s.omega0_s, s.rep.times, s.rep.wall_time);
  if (const auto ex = exact_for(c.cfg.problem))
    j["relative_error"] = {{"reference", ex->name()}, {"max", relative_error(s.rep.state, *ex)}};
  c.write_json("solve.json", j);

  c.out << "solve: " << (s.rep.converged ? "converged" : "NOT converged")
        << " iterations=" << s.rep.iterations << " S_omega=" << format_double(f.action)
        << " residual=" << fmt(s.rep.snls_residual) << " time[assembly=" << fmt(s.assembly_s)
        << "s factorization=" << fmt(s.rep.times.factorization)
        << "s iterations=" << fmt(s.rep.times.iteration) << "s]\n";
  return s.rep.converged ? kOk : kNumerical;
}

int cmd_omega0(Context& c) {
  require_problem(c.cfg, "omega0");
  auto t0 = Clock::now();
  const auto ops = assemble(c.cfg.problem, c.cfg.discretization);
  const double ta = seconds_since(t0);
  t0 = Clock::now();
  const auto lg = compute_omega0(c.cfg.problem, *ops);
  const double ts = seconds_since(t0);
  if (c.cfg.outputs.csv) write_field_csv(c.path("phi_lin.csv"), lg.phi_lin);
  json j = {{"spec", to_json(c.cfg.problem)},
            {"discretization", to_json(c.cfg.discretization)},
            {"omega0", lg.omega0},
            {"iterations", lg.iterations},
            {"residual", lg.residual},
            {"timing", {{"assembly_s", ta}, {"solve_s", ts}}}};
  c.write_json("omega0.json", j);
  c.out << "omega0: omega0=" << format_double(lg.omega0) << " iterations=" << lg.iterations
        << " residual=" << fmt(lg.residual) << "\n";
  return kOk;
}

int cmd_sweep(Context& c) {
  require_problem(c.cfg, "sweep");
  if (!c.cfg.sweep) throw ConfigError("sweep: missing config key sweep");
  const auto& sc = *c.cfg.sweep;
  SweepOptions opt;
  opt.flow = c.cfg.flow;
  opt.warm_start = sc.warm_start;
  opt.seed_shifts = sc.seed_shifts;
  opt.omega0 = sc.omega0;
  opt.margin = sc.margin;
  opt.workers = c.ov.workers;
  opt.keep_states = sc.write_fields || sc.write_rescaled;
  auto omegas = sc.omegas;

  const auto t0 = Clock::now();
  const auto res = sweep_omega(c.cfg.problem, c.cfg.discretization, omegas, opt);
  const double wall = seconds_since(t0);

  c.write_csv("sweep.csv", [&](std::ostream& os) {
    os << sweep_csv_header() << '\n';
    for (const auto& r : res.rows) os << to_csv_row(r) << '\n';
  });
  json j = res.metadata;
  json rows = json::array();
  std::size_t converged = 0;
  for (const auto& r : res.rows) {
    converged += r.converged ? 1 : 0;
    rows.push_back({{"omega", r.omega},
                    {"S_g", num(r.S_g)},
                    {"M_g", num(r.M_g)},
                    {"E_g", num(r.E_g)},
                    {"mu_g", num(r.mu_g)},
                    {"iterations", r.iterations},
                    {"residual", num(r.residual)},
                    {"converged", r.converged},
                    {"seed", r.seed},
                    {"error", r.error}});
  }
  j["rows"] = rows;
  j["wall_s"] = wall;

  std::string stability = "n/a";
  const bool complete = std::all_of(res.rows.begin(), res.rows.end(),
                                    [](const SweepRow& r) { return std::isfinite(r.M_g); });
  if (res.rows.size() >= 3 && complete) {
    const auto d = stability_diagnostic(res);
    c.write_csv("stability.csv", [&](std::ostream& os) {
      os << "omega,dM_domega\n";
      for (std::size_t i = 0; i < d.omega.size(); ++i)
        os << join_csv({d.omega[i], d.slope[i]}) << '\n';
    });
    j["stability"] = {{"slopes", d.slope}, {"omega_c", d.omega_c}};
    stability = d.omega_c.empty() ? "no sign change" : "omega_c=" + fmt(d.omega_c.front());
    if (d.omega_c.size() > 1) stability += " (+" + std::to_string(d.omega_c.size() - 1) + " more)";
  }
  c.write_json("sweep.json", j);
  if (c.cfg.outputs.csv && (sc.write_fields || sc.write_rescaled)) {
    const auto ops = assemble(c.cfg.problem, c.cfg.discretization);
    for (std::size_t i = 0; i < res.states.size(); ++i) {
      if (!res.states[i].grid) continue;
      const std::string tag = "omega_" + std::to_string(i) + ".csv";
      if (sc.write_fields) write_field_csv(c.path("fields/" + tag), res.states[i]);
      if (sc.write_rescaled) {
        write_field_csv(c.path("rescaled_hat/" + tag), rescale_hat(res.states[i], *ops));
        write_field_csv(c.path("rescaled_check/" + tag),
                        rescale_check(res.states[i], res.rows[i].omega, c.cfg.problem.alpha,
                                      ops->grid_ptr()));
      }
    }
  }

  const auto& last = res.rows.back();
  c.out << "sweep: rows=" << res.rows.size() << " converged=" << converged
        << " omega0=" << fmt(res.omega0) << " last[omega=" << fmt(last.omega)
        << " iterations=" << last.iterations << " S_g=" << format_double(last.S_g)
        << " residual=" << fmt(last.residual) << "] stability: " << stability
        << " wall=" << fmt(wall) << "s\n";
  return converged == res.rows.size() ? kOk : kNumerical;
}

int cmd_compare(Context& c) {
  if (!c.cfg.compare) throw ConfigError("compare: missing config key compare");
  const auto& cc = *c.cfg.compare;
  const auto rows = compare_schemes(cc.case_id, cc.runs, cc.max_iters);
  c.write_csv("compare.csv", [&](std::ostream& os) {
    os << comparison_csv_header() << '\n';
    for (const auto& r : rows) os << to_csv_row(r) << '\n';
  });
  c.write_csv("compare_history.csv", [&](std::ostream& os) {
    os << "scheme,tau,n,S_omega\n";
    for (const auto& r : rows)
      for (std::size_t n = 0; n < r.action_history.size(); ++n)
        os << to_string(r.scheme) << ',' << format_double(r.tau) << ',' << n << ','
           << format_double(r.action_history[n]) << '\n';
  });
  json arr = json::array();
  std::size_t ok = 0;
  for (const auto& r : rows) {
    ok += r.status == "ok" ? 1 : 0;
    arr.push_back({{"scheme", to_string(r.scheme)},
                   {"tau", r.tau},
                   {"wall_s", r.wall_s},
                   {"iterations", r.iterations},
                   {"rel_err", num(r.rel_err)},
                   {"status", r.status},
                   {"message", r.message}});
  }
  const auto cs = comparison_case(cc.case_id);
  c.write_json("compare.json", {{"case", cc.case_id},
                                {"spec", to_json(cs.spec)},
                                {"discretization", to_json(cs.disc)},
                                {"epsilon", cs.epsilon},
                                {"rows", arr}});
  c.out << "compare: case=" << cc.case_id << " rows=" << rows.size() << " ok=" << ok
        << " failed=" << rows.size() - ok << "\n";
  return kOk;
}

int cmd_converge(Context& c) {
  require_problem(c.cfg, "converge");
  if (!c.cfg.converge) throw ConfigError("converge: missing config key converge");
  const auto& cv = *c.cfg.converge;
  ConvergenceOptions opt;
  opt.flow = c.cfg.flow;
  opt.reference_h = cv.reference_h;
  const auto ex = exact_for(c.cfg.problem);
  if (cv.reference == "exact" && !ex)
    throw ConfigError("converge.reference=exact: no closed-form solution for this problem");
  if (cv.reference != "self" && ex) opt.exact = ex;
  const auto t0 = Clock::now();
  const auto res = convergence_study(c.cfg.problem, c.cfg.discretization, cv.h_list, opt);
  const double wall = seconds_since(t0);
  c.write_csv("converge.csv", [&](std::ostream& os) {
    os << convergence_csv_header() << '\n';
    for (const auto& r : res.rows) os << to_csv_row(r) << '\n';
  });
  json rows = json::array();
  bool all = true;
  for (const auto& r : res.rows) {
    all = all && r.converged;
    rows.push_back({{"h", r.h},
                    {"L2", r.L2},
                    {"H1", r.H1},
                    {"order_L2", num(r.order_L2)},
                    {"order_H1", num(r.order_H1)},
                    {"iterations", r.iterations},
                    {"converged", r.converged}});
  }
  json j = metadata(c.cfg);
  j["reference"] = res.reference;
  j["fitted_order_L2"] = num(res.fitted_order_L2);
  j["fitted_order_H1"] = num(res.fitted_order_H1);
  j["rows"] = rows;
  j["wall_s"] = wall;
  c.write_json("converge.json", j);
  c.out << "converge: levels=" << res.rows.size() << " reference=" << res.reference
        << " fitted_order_L2=" << fmt(res.fitted_order_L2)
        << " fitted_order_H1=" << fmt(res.fitted_order_H1) << " finest[L2=" << fmt(res.rows.back().L2)
        << " H1=" << fmt(res.rows.back().H1) << "] wall=" << fmt(wall) << "s\n";
  return all ? kOk : kNumerical;
}

int cmd_oracle_check(Context& c) {
  require_problem(c.cfg, "oracle-check");
  const auto ex = exact_for(c.cfg.problem);
  if (!ex)
    throw ConfigError(
        "oracle-check: problem.potential must be zero or a single delta at 0 (full geometry)");
  const auto s = solve_problem(c.cfg);
  const auto f = functionals(s.rep.state, c.cfg.problem, *s.ops);
  const double err = relative_error(s.rep.state, *ex);
  const Field exact = sample(*ex, s.ops->grid_ptr());
  c.write_csv("oracle.csv", [&](std::ostream& os) {
    os << "x,computed,exact\n";
    const auto& g = s.ops->grid();
    for (std::size_t i = 0; i < g.size(); ++i)
      os << join_csv({g.coordinate(0, i), s.rep.state.values[i], exact.values[i]}) << '\n';
  });
  const auto fe = functionals(exact, c.cfg.problem, *s.ops);
  json j = metadata(c.cfg);
  j["reference"] = ex->name();
  j["relative_max_error"] = err;
  j["converged"] = s.rep.converged;
  j["iterations"] = s.rep.iterations;
  j["snls_residual"] = num(s.rep.snls_residual);
  j["functionals"] = to_json(f);
  j["exact_functionals"] = to_json(fe);
  j["timing"] = timing_json(s.assembly_s, s.omega0_s, s.rep.times, s.rep.wall_time);
  c.write_json("oracle.json", j);
  c.out << "oracle-check: reference=" << ex->name() << " rel_err=" << fmt(err)
        << " iterations=" << s.rep.iterations << " S_omega=" << format_double(f.action)
        << " residual=" << fmt(s.rep.snls_residual) << "\n";
  return s.rep.converged ? kOk : kNumerical;
}

int cmd_crosscheck(Context& c) {
  require_problem(c.cfg, "crosscheck");
  if (!c.cfg.crosscheck) throw ConfigError("crosscheck: missing config key crosscheck");
  const auto& cc = *c.cfg.crosscheck;
  CrosscheckOptions opt;
  opt.energy_tau = cc.energy_tau;
  opt.energy_epsilon = cc.energy_epsilon;
  opt.energy_max_iters = cc.energy_max_iters;
  opt.stabilization = cc.stabilization;
  opt.action_flow = c.cfg.flow;
  opt.seed_shifts = cc.seed_shifts;
  const auto t0 = Clock::now();
  const auto rows = least_energy_crosscheck(c.cfg.problem, c.cfg.discretization, cc.masses, opt);
  const double wall = seconds_since(t0);
  c.write_csv("crosscheck.csv", [&](std::ostream& os) {
    os << crosscheck_csv_header() << '\n';
    for (const auto& r : rows) os << to_csv_row(r) << '\n';
  });
  json arr = json::array();
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    ok = ok && r.error.empty() && r.energy_converged && r.action_converged;
    if (std::isfinite(r.rel_diff)) worst = std::max(worst, r.rel_diff);
    arr.push_back({{"m", r.m},
                   {"mu_g", num(r.mu_g)},
                   {"omega", num(r.omega)},
                   {"M_g", num(r.M_g)},
                   {"rel_diff", num(r.rel_diff)},
                   {"energy_iterations", r.energy_iterations},
                   {"action_iterations", r.action_iterations},
                   {"energy_converged", r.energy_converged},
                   {"action_converged", r.action_converged},
                   {"energy_seed", r.energy_seed},
                   {"action_seed", r.action_seed},
                   {"error", r.error}});
  }
  json j = metadata(c.cfg);
  j["rows"] = arr;
  j["wall_s"] = wall;
  c.write_json("crosscheck.json", j);
  c.out << "crosscheck: rows=" << rows.size() << " max_rel_diff=" << fmt(worst)
        << (ok ? "" : " (some rows failed)") << " wall=" << fmt(wall) << "s\n";
  return ok ? kOk : kNumerical;
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.scheme) cfg.flow.scheme = scheme_from_string(*ov.scheme);
  if (ov.tau) cfg.flow.tau = *ov.tau;
  if (ov.epsilon) cfg.flow.epsilon = *ov.epsilon;
  if (ov.max_iters) cfg.flow.max_iters = *ov.max_iters;
  if (ov.seed_shift) {
    cfg.seed.kind = "gaussian";
    cfg.seed.shift = *ov.seed_shift;
  }
  validate(cfg.flow);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"solve",    "sweep",        "compare",
                                                 "converge", "omega0",       "oracle-check",
                                                 "crosscheck"};
  return names;
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const ContractViolation& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidState& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run_command(const std::string& name, RunConfig cfg, const Overrides& ov, std::ostream& out,
                std::ostream& err) {
  static const std::map<std::string, std::function<int(Context&)>> table = {
      {"solve", cmd_solve},       {"omega0", cmd_omega0},
      {"sweep", cmd_sweep},       {"compare", cmd_compare},
      {"converge", cmd_converge}, {"oracle-check", cmd_oracle_check},
      {"crosscheck", cmd_crosscheck},
  };
  try {
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
    apply_overrides(cfg, ov);
    Context ctx{cfg, ov, out};
    return it->second(ctx);
  } catch (...) {
    return report_exception(err);
  }
}

}  // namespace nlsgs::cli
