#pragma once

#include <span>
#include <vector>

#include "nlsgs/grid.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

struct NehariProjection {
  double lambda = 1.0;
  Field projected;
  int input_nehari_sign = 0;  ///< sign of I_ω before projection
};

/// λ_ω(φ) = (I*_ω(φ) / ||φ||_{2α+2}^{2α+2})^{1/(2α)}.
double lambda_omega(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops);
double lambda_omega(std::span<const double> u, const ProblemSpec& spec,
                    const DiscreteOperators& ops);

NehariProjection project_to_nehari(const Field& phi, const ProblemSpec& spec,
                                   const DiscreteOperators& ops);

/// |I_ω| <= tol·max(1, I*_ω).
bool on_nehari_manifold(const Field& phi, const ProblemSpec& spec, const DiscreteOperators& ops,
                        double tol = 1e-10);

/// Projection of exp(-|x - shift|²/2) sampled on the grid (shift empty means the origin).
Field gaussian_seed(const ProblemSpec& spec, const DiscreteOperators& ops,
                    const std::vector<double>& shift = {});

}  // namespace nlsgs
