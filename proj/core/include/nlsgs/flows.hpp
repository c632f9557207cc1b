#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlsgs/grid.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

enum class Scheme { BF, BE, PGF_BF, TS };
enum class StopNorm { Max, L2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);
std::string to_string(StopNorm s);
StopNorm stop_norm_from_string(const std::string& s);

struct FlowConfig {
  Scheme scheme = Scheme::BF;
  double tau = 1.0;
  double epsilon = 1e-9;
  StopNorm stop_norm = StopNorm::Max;
  std::size_t max_iters = 100000;
  bool record_history = false;
};

void validate(const FlowConfig& cfg);

struct PhaseTimes {
  double factorization = 0.0;
  double iteration = 0.0;
};

struct SolveReport {
  Field state;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> action_history;  ///< S_ω(φⁿ); last two entries unless recorded
  std::vector<double> lambda_history;  ///< λ_n (λ_0 = 1 for the seed)
  std::vector<double> step_norm_history;
  double final_step_norm = 0.0;
  double snls_residual = 0.0;
  bool positivity_violated = false;
  double theta = 0.0;  ///< shift actually used
  PhaseTimes times;
  double wall_time = 0.0;
};

/// One scheme bound to (spec, ops, τ) with its linear solver factored once.
class FlowStepper {
 public:
  FlowStepper(const ProblemSpec& spec, const DiscreteOperators& ops, Scheme scheme, double tau);
  ~FlowStepper();
  FlowStepper(FlowStepper&&) noexcept;

  /// Advances φⁿ to φⁿ⁺¹ (projected); returns λ_{n+1}. `iteration` labels errors.
  double step(std::span<const double> u, std::span<double> out, std::size_t iteration) const;
  /// The BF step without the final projection.
  void unprojected_bf(std::span<const double> u, std::span<double> out) const;

  const ProblemSpec& spec() const { return spec_; }

 private:
  double step_bf(std::span<const double> u, std::span<double> out, std::size_t it) const;
  double step_be(std::span<const double> u, std::span<double> out, std::size_t it) const;
  double step_pgf(std::span<const double> u, std::span<double> out, std::size_t it) const;
  double step_ts(std::span<const double> u, std::span<double> out, std::size_t it) const;
  double finish(std::span<double> out, std::size_t it) const;

  ProblemSpec spec_;
  const DiscreteOperators& ops_;
  Scheme scheme_;
  double tau_;
  std::unique_ptr<LinearSolver> solver_;
  std::vector<double> vnodal_;  // pointwise potential for the splitting scheme
};

/// θ used by the flows: the configured value, raised to |ω| + 1 when ω <= 0 so that the
/// implicit operator keeps a positive shift.
double effective_theta(const ProblemSpec& spec);

std::pair<Field, double> step_bf(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau);
std::pair<Field, double> step_be(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau);
std::pair<Field, double> step_pgf_bf(const Field& phi, const ProblemSpec& spec,
                                     const DiscreteOperators& ops, double tau);
std::pair<Field, double> step_ts(const Field& phi, const ProblemSpec& spec,
                                 const DiscreteOperators& ops, double tau);

/// Exact sub-flow of ∂ₜφ = -cφ + |φ|^{2α}φ over time t at one node; returns the factor
/// multiplying φ, or a nonpositive value when the solution blows up within t.
double splitting_nonlinear_ratio(double c, double phi, double alpha, double t);

/// Iterates the configured scheme from `seed` (projected first) until
/// ||φⁿ⁺¹ - φⁿ||/τ <= ε or max_iters.
SolveReport run_flow(const Field& seed, const ProblemSpec& spec, const DiscreteOperators& ops,
                     const FlowConfig& cfg);

/// Limit multiplier μ_φ of the continuous normalized flow.
double cngf_multiplier(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops);
/// Finite-τ multiplier (1/τ) ln λ of one unprojected BF step from φ.
double cngf_multiplier(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops,
                       double tau);

}  // namespace nlsgs
