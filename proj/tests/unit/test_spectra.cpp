#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nlsgs/spectra.hpp"

using namespace nlsgs;
using namespace nlsgs::test;

TEST(Omega0, SingleDelta) {
  const auto spec = line(32.0, 1.0, 1.0, single_delta(1.0));
  const auto ops = assemble(spec, fe(1.0 / 32, 2));
  const auto r = compute_omega0(spec, *ops);
  EXPECT_NEAR(r.omega0, 0.25, 1e-3);
  EXPECT_NEAR(ops->dot_mass(r.phi_lin.values, r.phi_lin.values), 1.0, 1e-12);
  for (double v : r.phi_lin.values) EXPECT_GE(v, -1e-12);
  EXPECT_LT(r.residual, 1e-8);
}

TEST(Omega0, EmptyBoxIsDirichletEigenvalue) {
  const auto spec = line(32.0);
  const auto ops = assemble(spec, sp(1.0 / 16));
  const double exact = -std::pow(std::numbers::pi / 64.0, 2);
  EXPECT_NEAR(compute_omega0(spec, *ops).omega0, exact, 1e-10);
  EXPECT_NEAR(exact, -0.00241, 1e-5);
}

TEST(Omega0, TripleDelta) {
  const DeltaSum v{{DeltaSite{-1.0, 2.0}, DeltaSite{0.0, 2.0}, DeltaSite{1.0, 2.0}}};
  const auto spec = line(32.0, 3.0, 3.0, v);
  const auto ops = assemble(spec, fe(1.0 / 32, 2));
  EXPECT_NEAR(compute_omega0(spec, *ops).omega0, 1.9216, 2e-3);
}

TEST(Omega0, OneDimensionalReferenceValues) {
  const auto ip = line(16.0, 1.0, 2.0, InversePower{1.0, 0.5});
  EXPECT_NEAR(compute_omega0(ip, *assemble(ip, fe(1.0 / 64, 2))).omega0, 1.6535, 2e-3);
  const auto well = line(16.0, 1.0, 2.0, FiniteWell{2.0, WellInterval{-2.0, 2.0}});
  EXPECT_NEAR(compute_omega0(well, *assemble(well, fe(1.0 / 64))).omega0, 1.6685, 2e-3);
  const auto dw = line(16.0, 0.5, 1.0, DoubleWellGaussian{2.0, 1.0});
  EXPECT_NEAR(compute_omega0(dw, *assemble(dw, sp(1.0 / 16))).omega0, 0.4277, 2e-3);
}

TEST(Omega0, RadialReferenceValues) {
  const auto ip3 = ball(3, 16.0, 1.0, 1.0, InversePower{1.0, 1.5});
  EXPECT_NEAR(compute_omega0(ip3, *assemble(ip3, fe(1.0 / 64))).omega0, 0.2986, 2e-3);
  const auto w2 = ball(2, 16.0, 1.0, 2.0, FiniteWell{2.0, WellBall{2.0}});
  EXPECT_NEAR(compute_omega0(w2, *assemble(w2, fe(1.0 / 64))).omega0, 1.2433, 2e-3);
}

TEST(Omega0, BackendsAgreeOnSmoothPotential) {
  const auto spec = line(16.0, 1.0, 1.0, GaussianWell{1.0});
  const double a = compute_omega0(spec, *assemble(spec, sp(1.0 / 8))).omega0;
  const double b = compute_omega0(spec, *assemble(spec, fd(1.0 / 64))).omega0;
  const double c = compute_omega0(spec, *assemble(spec, fe(1.0 / 32, 2))).omega0;
  EXPECT_NEAR(a, b, 1e-4);
  EXPECT_NEAR(a, c, 1e-6);
}

TEST(Omega0, MonotoneUnderDeepening) {
  double prev = -1.0;
  for (double depth : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto spec = line(16.0, 1.0, 1.0, GaussianWell{depth});
    const double w0 = compute_omega0(spec, *assemble(spec, fd(1.0 / 16))).omega0;
    EXPECT_GE(w0, prev);
    prev = w0;
  }
}

TEST(Omega0, TwoDimensionalSpectral) {
  const auto spec = square(16.0, 0.5, 1.0, TrappedCosineGaussian{});
  const auto r = compute_omega0(spec, *assemble(spec, sp(1.0 / 4)));
  EXPECT_NEAR(r.omega0, 0.4652, 2e-3);
}
