#pragma once

#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "nlsgs/grid.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

/// The scalar functionals of a state, all evaluated with the quadrature the flows use.
struct FunctionalReport {
  double mass = 0.0;              ///< M = ||φ||²
  double energy = 0.0;            ///< E = ||∇φ||² + G - P/(α+1)
  double action = 0.0;            ///< S_ω = E + ωM
  double nehari = 0.0;            ///< I_ω = I*_ω - P
  double quadratic = 0.0;         ///< I*_ω = ||∇φ||² + G + ωM
  double potential_energy = 0.0;  ///< G = ∫ V φ²
  double lp_norm_pow = 0.0;       ///< P = ||φ||_{2α+2}^{2α+2}
  double mu_g = 0.0;              ///< (||∇φ||² + G - P) / M, NaN for zero mass
  bool mu_g_defined = true;
};

nlohmann::json to_json(const FunctionalReport& r);
std::string csv_header(const FunctionalReport&);
std::string to_csv_row(const FunctionalReport& r);

/// Kinetic, potential and L² parts of a state.
struct QuadraticParts {
  double kinetic = 0.0;
  double potential = 0.0;
  double mass = 0.0;
  double quadratic(double omega) const { return kinetic + potential + omega * mass; }
};

QuadraticParts quadratic_parts(std::span<const double> u, const DiscreteOperators& ops);

FunctionalReport functionals(const Field& phi, const ProblemSpec& spec,
                             const DiscreteOperators& ops);
FunctionalReport functionals(std::span<const double> u, const ProblemSpec& spec,
                             const DiscreteOperators& ops);

struct ResidualReport {
  double value = 0.0;
  std::string norm;    ///< "L2": sqrt(rᵀM⁻¹r) of the weak residual r
  bool trivial = false;  ///< zero field: the residual is zero by definition
};

/// Discrete residual of -Δφ + Vφ + ωφ - |φ|^{2α}φ.
ResidualReport snls_residual(const Field& phi, const ProblemSpec& spec,
                             const DiscreteOperators& ops);
ResidualReport snls_residual(std::span<const double> u, const ProblemSpec& spec,
                             const DiscreteOperators& ops);

/// Throws ContractViolation when phi does not live on the operators' grid, InvalidState when
/// it holds non-finite values.
void check_field(const Field& phi, const DiscreteOperators& ops);

}  // namespace nlsgs
