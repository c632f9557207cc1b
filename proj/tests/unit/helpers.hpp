#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nlsgs/grid.hpp"
#include "nlsgs/nehari.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs::test {

inline ProblemSpec line(double L, double alpha = 1.0, double omega = 1.0,
                        Potential v = ZeroPotential{}) {
  ProblemSpec s;
  s.alpha = alpha;
  s.omega = omega;
  s.dim = 1;
  s.geometry = Geometry::Full1D;
  s.box = {Interval{-L, L}};
  s.potential = std::move(v);
  return s;
}

inline ProblemSpec ball(int d, double R, double alpha, double omega, Potential v) {
  ProblemSpec s;
  s.alpha = alpha;
  s.omega = omega;
  s.dim = d;
  s.geometry = Geometry::Radial;
  s.radius = R;
  s.potential = std::move(v);
  return s;
}

inline ProblemSpec square(double L, double alpha, double omega, Potential v) {
  ProblemSpec s;
  s.alpha = alpha;
  s.omega = omega;
  s.dim = 2;
  s.geometry = Geometry::Tensor2D;
  s.box = {Interval{-L, L}, Interval{-L, L}};
  s.potential = std::move(v);
  return s;
}

inline DiscretizationSpec sp(double h) { return {Method::SP, h, 1, false}; }
inline DiscretizationSpec fd(double h) { return {Method::FD2, h, 1, false}; }
inline DiscretizationSpec fe(double h, int order = 1, bool lumped = false) {
  return {Method::FE, h, order, lumped};
}

inline DeltaSum single_delta(double z) { return DeltaSum{{DeltaSite{0.0, z}}}; }

/// Samples f at the dof points of ops' grid.
template <class F>
Field sample_fn(const DiscreteOperators& ops, F f) {
  Field out(ops.grid_ptr());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto p = ops.grid().point(i);
    out.values[i] = p.size() == 1 ? f(p[0], 0.0) : f(p[0], p[1]);
  }
  return out;
}

/// Random smooth-ish field: a few Gaussian bumps with random signs, centers and widths.
inline Field random_field(const DiscreteOperators& ops, std::mt19937_64& rng, bool nonneg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& g = ops.grid();
  const double span = g.axes()[0].b - g.axes()[0].a;
  struct Bump { double c0, c1, w, a; };
  std::vector<Bump> bumps(4);
  for (auto& b : bumps)
    b = {0.25 * span * u(rng), 0.25 * span * u(rng), 0.5 + 1.5 * std::abs(u(rng)),
         nonneg ? 0.1 + std::abs(u(rng)) : u(rng)};
  return sample_fn(ops, [&](double x, double y) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double r2 = (x - b.c0) * (x - b.c0) +
                        (g.geometry() == Geometry::Tensor2D ? (y - b.c1) * (y - b.c1) : 0.0);
      v += b.a * std::exp(-r2 / (2.0 * b.w * b.w));
    }
    return v;
  });
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace nlsgs::test
