#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsgs/flows.hpp"
#include "nlsgs/oracles.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

// ---------------------------------------------------------------------------------------
// ω sweeps

struct SweepRow {
  double omega = 0.0;
  double S_g = 0.0;
  double M_g = 0.0;
  double E_g = 0.0;
  double mu_g = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string seed;   ///< label of the winning seed
  std::string error;  ///< non-empty when the flow raised
};

struct SweepOptions {
  FlowConfig flow;
  bool warm_start = true;
  /// Extra Gaussian shifts tried per ω next to the centered seed; the lowest action is kept.
  std::vector<std::vector<double>> seed_shifts;
  std::optional<double> omega0;  ///< computed when absent
  double margin = 1e-3;          ///< refuse ω < ω₀ + margin
  std::size_t workers = 1;       ///< cold-start rows may run concurrently
  bool keep_states = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<Field> states;  ///< per row when keep_states
  double omega0 = 0.0;
  nlohmann::json metadata;
};

/// Runs the configured flow for each ω in the sorted list.
SweepResult sweep_omega(const ProblemSpec& tmpl, const DiscretizationSpec& disc,
                        const std::vector<double>& omegas, const SweepOptions& opt);

std::string sweep_csv_header();
std::string to_csv_row(const SweepRow& r);

// ---------------------------------------------------------------------------------------
// stability sign diagnostic

struct StabilityDiagnostic {
  std::vector<double> omega;
  std::vector<double> slope;  ///< dM_g/dω
  std::vector<double> omega_c;  ///< every + to − crossing
  bool sign_change() const { return !omega_c.empty(); }
  bool unique_sign_change() const { return omega_c.size() == 1; }
};

/// Centered differences of M_g on the sorted ω grid (one-sided at the ends).
StabilityDiagnostic stability_diagnostic(const SweepResult& sweep);

// ---------------------------------------------------------------------------------------
// spatial convergence

struct ConvergenceRow {
  double h = 0.0;
  double L2 = 0.0;
  double H1 = 0.0;
  double order_L2 = 0.0;  ///< NaN on the first row
  double order_H1 = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct ConvergenceOptions {
  FlowConfig flow;
  std::optional<ExactSolution> exact;  ///< otherwise a finer self-reference is used
  double reference_h = 0.0;            ///< self-reference spacing; default min(h)/4
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double fitted_order_L2 = 0.0;  ///< least-squares slope of log error against log h
  double fitted_order_H1 = 0.0;
  std::string reference;  ///< "exact:<name>" or "self:h=<h>"
};

/// Solves on each h (1D and radial grids) and measures L² and H¹ errors.
ConvergenceResult convergence_study(const ProblemSpec& spec, const DiscretizationSpec& disc,
                                    const std::vector<double>& h_list,
                                    const ConvergenceOptions& opt);

std::string convergence_csv_header();
std::string to_csv_row(const ConvergenceRow& r);

// ---------------------------------------------------------------------------------------
// scheme comparison on the V ≡ 0 cases

struct ComparisonCase {
  ProblemSpec spec;
  DiscretizationSpec disc;
  double epsilon = 1e-9;
};

/// Case 1: ω = 1 on [-32, 32]; 2: ω = 0.1 on [-64, 64]; 3: ω = 10 on [-16, 16]; SP, h = 1/16.
ComparisonCase comparison_case(int id);

struct ComparisonRow {
  Scheme scheme = Scheme::BF;
  double tau = 0.0;
  double wall_s = 0.0;
  std::size_t iterations = 0;
  double rel_err = 0.0;
  std::string status;  ///< ok | not_converged | step_failure | blow_up
  std::string message;
  std::vector<double> action_history;
};

struct ComparisonRequest {
  Scheme scheme;
  std::vector<double> taus;
};

std::vector<ComparisonRow> compare_schemes(int case_id, const std::vector<ComparisonRequest>& runs,
                                           std::size_t max_iters = 200000);

std::string comparison_csv_header();
std::string to_csv_row(const ComparisonRow& r);

// ---------------------------------------------------------------------------------------
// least energy / least action correspondence

struct CrosscheckRow {
  double m = 0.0;
  double mu_g = 0.0;
  double omega = 0.0;
  double M_g = 0.0;
  double rel_diff = 0.0;  ///< |M_g - m| / m
  std::size_t energy_iterations = 0;
  std::size_t action_iterations = 0;
  bool energy_converged = false;
  bool action_converged = false;
  std::string energy_seed;  ///< seed that gave the lowest energy
  std::string action_seed;  ///< seed that gave the lowest action
  std::string error;
};

struct CrosscheckOptions {
  double energy_tau = 1.0;
  double energy_epsilon = 1e-9;
  double stabilization = 1.0;  ///< shift s of the mass-constrained implicit step
  std::size_t energy_max_iters = 100000;
  FlowConfig action_flow;
  /// Both flows start from every listed Gaussian shift (plus the centered one) and keep the
  /// lowest energy or action; needed once symmetry breaking sets in.
  std::vector<std::vector<double>> seed_shifts;
};

/// Least energy state at mass m by a mass-rescaled BF flow, then the least action state at
/// ω = -μ^g; reports M_g(ω) for comparison with m.
std::vector<CrosscheckRow> least_energy_crosscheck(const ProblemSpec& tmpl,
                                                   const DiscretizationSpec& disc,
                                                   const std::vector<double>& masses,
                                                   const CrosscheckOptions& opt);

/// The mass-constrained flow alone.
struct EnergyGroundState {
  Field state;
  double mu_g = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};
EnergyGroundState least_energy_state(const ProblemSpec& spec, const DiscreteOperators& ops,
                                     double mass, const CrosscheckOptions& opt,
                                     const std::vector<double>& shift = {});

std::string crosscheck_csv_header();
std::string to_csv_row(const CrosscheckRow& r);

}  // namespace nlsgs
