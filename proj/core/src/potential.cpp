#include "nlsgs/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nlsgs/errors.hpp"

namespace nlsgs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double norm2(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

}  // namespace

std::string potential_name(const Potential& v) {
  return std::visit(overloaded{
                        [](const ZeroPotential&) { return std::string("zero"); },
                        [](const DeltaSum&) { return std::string("delta"); },
                        [](const FiniteWell&) { return std::string("well"); },
                        [](const InversePower&) { return std::string("inverse_power"); },
                        [](const GaussianWell&) { return std::string("gaussian"); },
                        [](const DoubleWellGaussian&) { return std::string("double_well"); },
                        [](const TrappedCosineGaussian&) { return std::string("cosine_gaussian"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                    },
                    v);
}

double evaluate(const Potential& v, std::span<const double> x) {
  return std::visit(
      overloaded{
          [](const ZeroPotential&) { return 0.0; },
          [](const DeltaSum&) { return 0.0; },
          [&](const FiniteWell& w) {
            const bool inside = std::visit(
                overloaded{[&](const WellInterval& i) { return x[0] > i.lo && x[0] < i.hi; },
                           [&](const WellBall& b) { return norm2(x) < b.radius * b.radius; }},
                w.region);
            return inside ? -w.depth : 0.0;
          },
          [&](const InversePower& p) {
            const double r = std::sqrt(norm2(x));
            return -p.gamma / std::pow(r, p.sigma);
          },
          [&](const GaussianWell& g) { return -g.depth * std::exp(-norm2(x)); },
          [&](const DoubleWellGaussian& g) {
            const double a = x[0] - g.center;
            const double b = x[0] + g.center;
            return -g.depth * (std::exp(-a * a) + std::exp(-b * b));
          },
          [&](const TrappedCosineGaussian& g) {
            constexpr double pi = std::numbers::pi;
            return -g.depth * std::exp(-g.kappa * norm2(x)) * (1.0 - std::cos(pi * x[0])) *
                   (1.0 - std::cos(pi * x[1]));
          },
          [](const Tabulated&) -> double {
            throw ContractViolation("tabulated potential has no pointwise evaluator");
          },
      },
      v);
}

bool radially_symmetric(const Potential& v) {
  return std::visit(
      overloaded{
          [](const ZeroPotential&) { return true; },
          [](const DeltaSum& d) {
            return d.sites.size() == 1 && d.sites.front().center == 0.0;
          },
          [](const FiniteWell& w) {
            return std::visit(overloaded{[](const WellInterval& i) { return i.lo == -i.hi; },
                                         [](const WellBall&) { return true; }},
                              w.region);
          },
          [](const InversePower&) { return true; },
          [](const GaussianWell&) { return true; },
          [](const DoubleWellGaussian&) { return false; },
          [](const TrappedCosineGaussian&) { return false; },
          [](const Tabulated&) { return false; },
      },
      v);
}

void validate(const Potential& v, int dim) {
  std::visit(
      overloaded{
          [](const ZeroPotential&) {},
          [&](const DeltaSum& d) {
            if (dim != 1) throw ConfigError("potential.kind=delta: delta potentials are 1D only");
            if (d.sites.empty()) throw ConfigError("potential.sites: at least one delta site");
            for (const auto& s : d.sites)
              if (!(s.strength > 0.0) || !std::isfinite(s.center))
                throw ConfigError("potential.sites: strength Z must be > 0");
          },
          [&](const FiniteWell& w) {
            if (!(w.depth > 0.0)) throw ConfigError("potential.depth must be > 0");
            std::visit(overloaded{[&](const WellInterval& i) {
                                    if (dim != 1)
                                      throw ConfigError("potential.interval requires dim = 1");
                                    if (!(i.lo < i.hi))
                                      throw ConfigError("potential.interval: lo < hi required");
                                  },
                                  [](const WellBall& b) {
                                    if (!(b.radius > 0.0))
                                      throw ConfigError("potential.radius must be > 0");
                                  }},
                       w.region);
          },
          [&](const InversePower& p) {
            if (!(p.gamma > 0.0)) throw ConfigError("potential.gamma must be > 0");
            const double cap = std::min(2.0, static_cast<double>(dim));
            if (!(p.sigma > 0.0 && p.sigma < cap))
              throw ConfigError("potential.sigma must satisfy 0 < sigma < min(2, d)");
          },
          [](const GaussianWell& g) {
            if (!(g.depth > 0.0)) throw ConfigError("potential.depth must be > 0");
          },
          [&](const DoubleWellGaussian& g) {
            if (dim != 1) throw ConfigError("potential.kind=double_well is 1D only");
            if (!(g.depth > 0.0)) throw ConfigError("potential.depth must be > 0");
          },
          [&](const TrappedCosineGaussian& g) {
            if (dim != 2) throw ConfigError("potential.kind=cosine_gaussian is 2D only");
            if (!(g.depth > 0.0)) throw ConfigError("potential.depth must be > 0");
            if (!(g.kappa > 0.0)) throw ConfigError("potential.kappa must be > 0");
          },
          [](const Tabulated& t) {
            for (double x : t.values) {
              if (!std::isfinite(x)) throw ConfigError("potential.values: non-finite sample");
              if (x > 0.0) throw ConfigError("potential.values: samples must be nonpositive");
            }
          },
      },
      v);
}

std::vector<double> singular_points_1d(const Potential& v) {
  std::vector<double> pts;
  std::visit(overloaded{
                 [&](const DeltaSum& d) {
                   for (const auto& s : d.sites) pts.push_back(s.center);
                 },
                 [&](const FiniteWell& w) {
                   std::visit(overloaded{[&](const WellInterval& i) {
                                           pts.push_back(i.lo);
                                           pts.push_back(i.hi);
                                         },
                                         [&](const WellBall& b) {
                                           pts.push_back(-b.radius);
                                           pts.push_back(b.radius);
                                         }},
                              w.region);
                 },
                 [&](const InversePower&) { pts.push_back(0.0); },
                 [](const auto&) {},
             },
             v);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace nlsgs
