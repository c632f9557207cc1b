#include <cmath>
#include <limits>
#include <random>

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

// Composite Simpson on [-L, L] for the closed-form soliton integrals; independent of the
// discrete operators under test.
template <class F>
double simpson(F f, double L, int n = 200000) {
  const double h = 2.0 * L / n;
  double s = f(-L) + f(L);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-L + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Functionals, SolitonOracleValuesFromQuadrature) {
  const double L = 32.0;
  const auto phi = [](double x) { return free_soliton(1.0, 1.0, x); };
  const auto dphi = [](double x) {
    const double t = std::tanh(x);
    return -std::sqrt(2.0) * t / std::cosh(x);
  };
  const double mass = simpson([&](double x) { return phi(x) * phi(x); }, L);
  const double grad = simpson([&](double x) { return dphi(x) * dphi(x); }, L);
  const double p = simpson([&](double x) { return std::pow(phi(x), 4); }, L);
  EXPECT_NEAR(mass, 4.0, 1e-12);
  EXPECT_NEAR(p, 16.0 / 3.0, 1e-12);
  EXPECT_NEAR(grad + mass - p, 0.0, 1e-12);
  EXPECT_NEAR(grad + mass - p / 2.0, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(grad - p / 2.0, -4.0 / 3.0, 1e-12);
}

TEST(Functionals, ExactSolitonOnSpectralGrid) {
  const auto spec = line(32.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const auto phi = sample(ExactSolution::free_soliton(1.0, 1.0), ops->grid_ptr());
  const auto r = functionals(phi, spec, *ops);
  EXPECT_NEAR(r.mass, 4.0, 1e-9);
  EXPECT_NEAR(r.nehari, 0.0, 1e-9);
  EXPECT_NEAR(r.action, 8.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.energy, -4.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.lp_norm_pow, 16.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.mu_g, -1.0, 1e-9);
}

TEST(Functionals, ZeroFieldGivesZeros) {
  const auto spec = line(8.0);
  const auto ops = assemble(spec, fd(0.25));
  const Field zero(ops->grid_ptr());
  const auto r = functionals(zero, spec, *ops);
  EXPECT_EQ(r.mass, 0.0);
  EXPECT_EQ(r.energy, 0.0);
  EXPECT_EQ(r.action, 0.0);
  EXPECT_EQ(r.nehari, 0.0);
  EXPECT_EQ(r.quadratic, 0.0);
  EXPECT_EQ(r.lp_norm_pow, 0.0);
  EXPECT_FALSE(r.mu_g_defined);
  const auto res = snls_residual(zero, spec, *ops);
  EXPECT_TRUE(res.trivial);
  EXPECT_EQ(res.value, 0.0);
}

TEST(Functionals, DeltaGroundStateIsOnNehariManifold) {
  const auto spec = line(32.0, 1.0, 1.0, single_delta(1.0));
  const auto ops = assemble(spec, fe(1.0 / 32, 2));
  const auto phi = sample(ExactSolution::delta_ground_state(1.0, 1.0, 1.0), ops->grid_ptr());
  const auto r = functionals(phi, spec, *ops);
  EXPECT_LT(std::abs(r.nehari) / r.quadratic, 1e-6);
}

TEST(Residual, ExactSolitonSpectral) {
  const auto spec = line(32.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const auto phi = sample(ExactSolution::free_soliton(1.0, 1.0), ops->grid_ptr());
  EXPECT_LT(snls_residual(phi, spec, *ops).value, 1e-8);
}

TEST(Residual, ConvergedFlowAndGenericSeed) {
  const auto spec = line(32.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const auto seed = gaussian_seed(spec, *ops);
  EXPECT_GE(snls_residual(seed, spec, *ops).value, 1e-2);
  FlowConfig cfg;
  cfg.tau = 4.0;
  cfg.epsilon = 1e-9;
  const auto rep = run_flow(seed, spec, *ops, cfg);
  ASSERT_TRUE(rep.converged);
  EXPECT_LE(snls_residual(rep.state, spec, *ops).value, 100 * cfg.epsilon);
}

TEST(Functionals, CheckFieldRejectsForeignAndNonFinite) {
  const auto spec = line(8.0);
  const auto a = assemble(spec, fd(0.25));
  const auto b = assemble(spec, fd(0.5));
  const Field other(b->grid_ptr());
  EXPECT_THROW(functionals(other, spec, *a), ContractViolation);
  Field bad(a->grid_ptr());
  bad.values[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(functionals(bad, spec, *a), InvalidState);
}

// Identities and scaling hold for arbitrary fields on every discretization.
class IdentityProperty : public ::testing::TestWithParam<int> {};

TEST_P(IdentityProperty, ActionNehariAndScaling) {
  ProblemSpec spec;
  OperatorsPtr ops;
  switch (GetParam()) {
    case 0: spec = line(16.0, 1.0, 1.0); ops = assemble(spec, sp(0.125)); break;
    case 1: spec = line(16.0, 2.0, 2.0, single_delta(2.0)); ops = assemble(spec, fe(0.125, 2)); break;
    case 2: spec = line(16.0, 0.5, 1.0, GaussianWell{1.0}); ops = assemble(spec, fd(0.125)); break;
    case 3: spec = ball(3, 8.0, 1.0, 1.0, InversePower{1.0, 1.5}); ops = assemble(spec, fe(0.0625)); break;
    default: spec = square(6.0, 0.5, 1.0, TrappedCosineGaussian{}); ops = assemble(spec, sp(0.25)); break;
  }
  std::mt19937_64 rng(1234 + GetParam());
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_field(*ops, rng, false);
    const auto r = functionals(phi, spec, *ops);
    const double a = spec.alpha;
    const double scale = std::abs(r.action) + std::abs(r.nehari) + std::abs(r.quadratic);
    EXPECT_LE(std::abs(r.action - r.nehari / (a + 1) - a * r.quadratic / (a + 1)), 1e-12 * scale);
    EXPECT_LE(std::abs(r.nehari - r.quadratic + r.lp_norm_pow),
              1e-12 * (std::abs(r.quadratic) + r.lp_norm_pow));
    EXPECT_NEAR(r.energy, r.action - spec.omega * r.mass, 1e-12 * scale);

    const double c = 1.7;
    Field scaled = phi;
    for (auto& v : scaled.values) v *= c;
    const auto rs = functionals(scaled, spec, *ops);
    EXPECT_NEAR(rs.quadratic, c * c * r.quadratic, 1e-12 * std::abs(rs.quadratic));
    EXPECT_NEAR(rs.lp_norm_pow, std::pow(c, 2 * a + 2) * r.lp_norm_pow, 1e-12 * rs.lp_norm_pow);
  }
}

INSTANTIATE_TEST_SUITE_P(Discretizations, IdentityProperty, ::testing::Range(0, 5));

TEST(Functionals, QuadraticPartPositiveAboveOmega0) {
  auto spec = line(16.0, 1.0, 1.0, single_delta(1.0));
  const auto ops = assemble(spec, fe(0.0625, 2));
  const auto lin = compute_omega0(spec, *ops);
  spec.omega = lin.omega0 + 1e-6;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto phi = random_field(*ops, rng, trial % 2 == 0);
    EXPECT_GT(functionals(phi, spec, *ops).quadratic, 0.0);
  }
  EXPECT_GT(functionals(lin.phi_lin, spec, *ops).quadratic, 0.0);
}

TEST(ProblemSpec, Validation) {
  auto s = line(8.0);
  EXPECT_NO_THROW(validate(s));
  s.alpha = 0.0;
  EXPECT_THROW(validate(s), ConfigError);
  auto r = ball(3, 8.0, 2.5, 1.0, InversePower{1.0, 1.5});
  EXPECT_THROW(validate(r), ConfigError);  // alpha >= 2/(d-2)
  r.alpha = 1.0;
  EXPECT_NO_THROW(validate(r));
  s = line(8.0);
  s.theta = -1.0;
  EXPECT_THROW(validate(s), ConfigError);
  s = line(8.0, 1.0, 1.0, InversePower{1.0, 1.2});  // sigma >= d
  EXPECT_THROW(validate(s), ConfigError);
  s = line(8.0);
  s.box = {Interval{1.0, -1.0}};
  EXPECT_THROW(validate(s), ConfigError);
  auto q = ball(2, 8.0, 1.0, 1.0, DoubleWellGaussian{});
  EXPECT_THROW(validate(q), ConfigError);
}

TEST(ProblemSpec, SpectralCondition) {
  auto s = line(8.0, 1.0, 0.2);
  EXPECT_THROW(check_spectral_condition(s, 0.25), SpectralConditionError);
  EXPECT_THROW(check_spectral_condition(s, 0.2), SpectralConditionError);
  s.omega = 0.3;
  EXPECT_NO_THROW(check_spectral_condition(s, 0.25));
}
