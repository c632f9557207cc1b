#include "nlsgs/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nlsgs/errors.hpp"

namespace nlsgs {

// Golub-Welsch on the Jacobi matrix of P^{(0, beta)} over [-1, 1], mapped to [0, 1].
QuadratureRule gauss_jacobi01(int n, double beta) {
  if (n < 1 || !(beta > -1.0)) throw ContractViolation("gauss_jacobi01: n >= 1, beta > -1");
  const double a = 0.0;
  const double b = beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + a + b;
      const double beta_m =
          4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(beta_m);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double scale = std::pow(2.0, -b - 1.0);
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    rule.nodes[i] = 0.5 * (1.0 + eig.eigenvalues()(i));
    rule.weights[i] = mu0 * v0 * v0 * scale;
  }
  return rule;
}

}  // namespace nlsgs
