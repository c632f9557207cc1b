#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nlsgs/errors.hpp"
#include "nlsgs/functionals.hpp"
#include "nlsgs/nehari.hpp"

using namespace nlsgs;
using namespace nlsgs::test;

namespace {

// λ for e^{-x²/2}, V ≡ 0, α = 1, ω = 1: I* = (3/2)√π, ‖u‖₄⁴ = √(π/2).
const double kGaussLambda = std::sqrt(1.5 * std::sqrt(2.0));

Field plain_gaussian(const DiscreteOperators& ops) {
  return sample_fn(ops, [](double x, double) { return std::exp(-x * x / 2); });
}

}  // namespace

TEST(Lambda, GaussianClosedForm) {
  EXPECT_NEAR(kGaussLambda, 1.456475, 1e-6);
  const auto spec = line(16.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  EXPECT_NEAR(lambda_omega(plain_gaussian(*ops), spec, *ops), kGaussLambda, 1e-10);
}

TEST(Lambda, OneOnManifoldAndHomogeneous) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const auto g = plain_gaussian(*ops);
  const auto p = project_to_nehari(g, spec, *ops);
  EXPECT_NEAR(lambda_omega(p.projected, spec, *ops), 1.0, 1e-13);
  Field twice = g;
  for (auto& v : twice.values) v *= 2.0;
  EXPECT_NEAR(lambda_omega(twice, spec, *ops), lambda_omega(g, spec, *ops) / 2.0, 1e-13);
}

TEST(Lambda, RejectsZeroFieldAndBadOmega) {
  auto spec = line(16.0);
  const auto ops = assemble(spec, sp(0.25));
  EXPECT_THROW(lambda_omega(Field(ops->grid_ptr()), spec, *ops), DomainError);
  spec.omega = -1.0;
  EXPECT_THROW(lambda_omega(plain_gaussian(*ops), spec, *ops), SpectralConditionError);
}

TEST(Projection, GaussianPeakAndManifoldEquation) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const auto p = project_to_nehari(plain_gaussian(*ops), spec, *ops);
  EXPECT_EQ(p.input_nehari_sign, 1);
  EXPECT_NEAR(max_abs(p.projected.values), kGaussLambda, 1e-10);
  const auto r = functionals(p.projected, spec, *ops);
  EXPECT_NEAR(r.lp_norm_pow, r.quadratic, 1e-12 * r.quadratic);
  EXPECT_TRUE(on_nehari_manifold(p.projected, spec, *ops));
  const auto again = project_to_nehari(p.projected, spec, *ops);
  EXPECT_LE(max_abs_diff(again.projected.values, p.projected.values), 1e-12);
}

TEST(Seed, CenteredLineSeedIsSymmetric) {
  const auto spec = line(16.0);
  const auto ops = assemble(spec, fd(0.125));
  const auto s = gaussian_seed(spec, *ops);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(s.values[i], s.values[n - 1 - i]);
  EXPECT_TRUE(on_nehari_manifold(s, spec, *ops));
}

TEST(Seed, ShiftedDoubleWellSeedIsAsymmetric) {
  const auto spec = line(16.0, 0.5, 1.0, DoubleWellGaussian{2.0, 1.0});
  const auto ops = assemble(spec, fd(1.0 / 64));
  const auto s = gaussian_seed(spec, *ops, {2.0});
  const long i = ops->grid().node_at(2.0, 1e-9);
  const long j = ops->grid().node_at(-2.0, 1e-9);
  ASSERT_GE(i, 0);
  ASSERT_GE(j, 0);
  EXPECT_GT(s.values[i], 100.0 * s.values[j]);
  EXPECT_TRUE(on_nehari_manifold(s, spec, *ops));
}

TEST(Seed, RadialSeedIsMonotone) {
  const auto spec = ball(3, 8.0, 1.0, 1.0, InversePower{1.0, 1.5});
  const auto ops = assemble(spec, fe(0.125, 2));
  const auto s = gaussian_seed(spec, *ops);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s.values[i], s.values[i - 1]);
  EXPECT_THROW(gaussian_seed(spec, *ops, {1.0}), ConfigError);
  EXPECT_TRUE(on_nehari_manifold(s, spec, *ops));
}

TEST(Seed, WrongShiftDimension) {
  const auto spec = square(4.0, 0.5, 1.0, TrappedCosineGaussian{});
  const auto ops = assemble(spec, sp(0.25));
  EXPECT_THROW(gaussian_seed(spec, *ops, {1.0}), ConfigError);
  EXPECT_NO_THROW(gaussian_seed(spec, *ops, {1.0, 1.0}));
}

// Idempotence, ray uniqueness and the λ sign law over 100 random fields.
TEST(ProjectionProperty, IdempotenceRayUniquenessSignLaw) {
  const auto spec = line(16.0, 1.0, 1.0, single_delta(1.0));
  const auto ops = assemble(spec, fe(0.0625, 2));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> cdist(0.05, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto phi = random_field(*ops, rng, trial % 3 == 0);
    const auto p = project_to_nehari(phi, spec, *ops);
    const double peak = max_abs(p.projected.values);
    const auto pp = project_to_nehari(p.projected, spec, *ops);
    EXPECT_LE(max_abs_diff(pp.projected.values, p.projected.values), 1e-12 * std::max(1.0, peak));

    const double c = cdist(rng);
    Field scaled = phi;
    for (auto& v : scaled.values) v *= c;
    const auto ps = project_to_nehari(scaled, spec, *ops);
    EXPECT_LE(max_abs_diff(ps.projected.values, p.projected.values), 1e-12 * std::max(1.0, peak));

    const double nehari = functionals(phi, spec, *ops).nehari;
    if (nehari > 0) {
      EXPECT_GT(p.lambda, 1.0);
    } else if (nehari < 0) {
      EXPECT_LT(p.lambda, 1.0);
    }
    EXPECT_EQ(p.input_nehari_sign, nehari > 0 ? 1 : (nehari < 0 ? -1 : 0));
  }
}
