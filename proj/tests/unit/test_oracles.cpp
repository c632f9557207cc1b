#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nlsgs/errors.hpp"
#include "nlsgs/flows.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/oracles.hpp"
#include "nlsgs/spectra.hpp"

using namespace nlsgs;
using namespace nlsgs::test;

namespace {

double l2_distance(const DiscreteOperators& ops, const Field& a, const Field& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
  return std::sqrt(ops.dot_mass(d, d));
}

}  // namespace

TEST(FreeSoliton, PeaksAndDecay) {
  EXPECT_NEAR(free_soliton(1.0, 1.0, 0.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(free_soliton(1.0, 4.0, 0.0), std::sqrt(8.0), 1e-14);
  double prev = free_soliton(1.0, 1.0, 0.0);
  for (double x = 0.5; x < 40.0; x += 0.5) {
    const double v = free_soliton(1.0, 1.0, x);
    EXPECT_LT(v, prev);
    EXPECT_EQ(v, free_soliton(1.0, 1.0, -x));
    prev = v;
  }
  EXPECT_LT(prev, 1e-15);
}

TEST(DeltaGroundState, ValuesAndSymmetry) {
  EXPECT_NEAR(delta_ground_state(1.0, 1.0, 1.0, 0.0), std::sqrt(1.5), 1e-14);
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5})
    EXPECT_NEAR(delta_ground_state(2.0, 1.5, 0.0, x), free_soliton(2.0, 1.5, x), 1e-14);
  for (double x : {0.3, 1.0, 5.0})
    EXPECT_EQ(delta_ground_state(1.5, 2.0, 1.0, x), delta_ground_state(1.5, 2.0, 1.0, -x));
  EXPECT_THROW(delta_ground_state(1.0, 0.2, 1.0, 0.0), DomainError);
  // jump condition φ'(0+) - φ'(0-) = -Z φ(0)
  const auto e = ExactSolution::delta_ground_state(1.0, 1.0, 1.0);
  EXPECT_NEAR(2.0 * e.derivative(0.0), -1.0 * e.value(0.0), 1e-12);
}

TEST(RelativeError, TrivialCases) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, fd(0.125));
  const auto ex = ExactSolution::free_soliton(1.0, 1.0);
  auto phi = sample(ex, ops->grid_ptr());
  EXPECT_EQ(relative_error(phi, ex), 0.0);
  for (auto& v : phi.values) v *= 1.01;
  EXPECT_NEAR(relative_error(phi, ex), 0.01, 1e-14);
}

TEST(Rescale, HatHasUnitMass) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, sp(0.125));
  const auto phi = sample(ExactSolution::free_soliton(1.0, 3.0), ops->grid_ptr());
  const auto hat = rescale_hat(phi, *ops);
  EXPECT_NEAR(ops->dot_mass(hat.values, hat.values), 1.0, 1e-13);
}

TEST(Rescale, CheckMapsSolitonsToUnitFrequency) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, fd(1.0 / 64));
  const auto ref = assemble(line(8.0), fd(1.0 / 32));
  for (double alpha : {1.0, 2.0}) {
    const auto target = sample(ExactSolution::free_soliton(alpha, 1.0), ref->grid_ptr());
    for (double omega : {0.5, 2.0, 5.0}) {
      const auto phi = sample(ExactSolution::free_soliton(alpha, omega), ops->grid_ptr());
      const auto chk = rescale_check(phi, omega, alpha, ref->grid_ptr());
      EXPECT_LE(max_abs_diff(chk.values, target.values), 2e-5) << alpha << " " << omega;
    }
  }
}

TEST(Rescale, CriticalMassInvariance) {
  // α = 2/d with d = 1: the check rescaling preserves mass.
  const auto spec = line(16.0);
  const auto ops = assemble(spec, fd(1.0 / 64));
  const auto ref = assemble(line(16.0), fd(1.0 / 64));
  const auto phi = sample(ExactSolution::free_soliton(2.0, 2.0), ops->grid_ptr());
  const auto chk = rescale_check(phi, 2.0, 2.0, ref->grid_ptr());
  EXPECT_NEAR(ref->dot_mass(chk.values, chk.values), ops->dot_mass(phi.values, phi.values), 1e-6);
}

TEST(Exact, DeltaResidualIsDiscretizationLevel) {
  const auto spec = line(32.0, 1.0, 1.0, single_delta(1.0));
  double prev = 1.0;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto ops = assemble(spec, fe(h, 2));
    const auto phi = sample(ExactSolution::delta_ground_state(1.0, 1.0, 1.0), ops->grid_ptr());
    const double r = snls_residual(phi, spec, *ops).value;
    EXPECT_LT(r, prev / 3);
    prev = r;
  }
  EXPECT_LT(prev, 1e-4);
}

namespace {

struct DeltaCaseIII {
  ProblemSpec spec = line(32.0, 3.0, 2.0,
                          DeltaSum{{DeltaSite{-1.0, 2.0}, DeltaSite{0.0, 2.0}, DeltaSite{1.0, 2.0}}});
  OperatorsPtr ops = assemble(spec, fe(1.0 / 32, 2));

  Field solve(double omega) {
    auto s = spec;
    s.omega = omega;
    FlowConfig cfg;
    cfg.tau = 1.0;
    cfg.epsilon = 1e-9;
    const auto r = run_flow(gaussian_seed(s, *ops), s, *ops, cfg);
    EXPECT_TRUE(r.converged) << "omega=" << omega;
    return r.state;
  }
};

}  // namespace

TEST(Asymptotics, NormalizedStateApproachesLinearGroundState) {
  DeltaCaseIII c;
  const auto lin = compute_omega0(c.spec, *c.ops);
  double prev = 1e300;
  for (double omega : {2.0, 1.96, 1.93}) {
    const double d = l2_distance(*c.ops, rescale_hat(c.solve(omega), *c.ops), lin.phi_lin);
    EXPECT_LT(d, prev) << "omega=" << omega;
    prev = d;
  }
}

TEST(Asymptotics, RescaledStateApproachesFreeSoliton) {
  DeltaCaseIII c;
  const auto ref = assemble(line(8.0), fd(1.0 / 64));
  const auto target = sample(ExactSolution::free_soliton(3.0, 1.0), ref->grid_ptr());
  double prev = 1e300;
  for (double omega : {10.0, 40.0, 160.0}) {
    const auto chk = rescale_check(c.solve(omega), omega, 3.0, ref->grid_ptr());
    const double d = l2_distance(*ref, chk, target);
    EXPECT_LT(d, prev) << "omega=" << omega;
    prev = d;
  }
}
