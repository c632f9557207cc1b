#include "nlsgs/krylov.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "nlsgs/errors.hpp"

namespace nlsgs {

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}
}  // namespace

CgResult pcg(const LinearMap& apply, const LinearMap& precondition, std::span<const double> b,
             std::span<double> x, double tol, std::size_t max_iters) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {};
  }
  double rnorm = std::sqrt(dot(r, r));
  if (rnorm <= tol * bnorm) return {0, rnorm / bnorm};
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    apply(p, q);
    const double curv = dot(p, q);
    if (!(curv > 0.0)) throw NumericalFailure("conjugate gradients: nonpositive curvature");
    const double a = rz / curv;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += a * p[i];
      r[i] -= a * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    if (!std::isfinite(rnorm)) throw NumericalFailure("conjugate gradients: breakdown");
    if (rnorm <= tol * bnorm) return {it, rnorm / bnorm};
    precondition(r, z);
    const double rz_new = dot(r, z);
    if (!(rz_new > 0.0)) throw NumericalFailure("conjugate gradients: preconditioner breakdown");
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw NumericalFailure("conjugate gradients: no convergence in " + std::to_string(max_iters) +
                         " iterations");
}

}  // namespace nlsgs
