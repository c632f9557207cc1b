#include <vector>

#include <benchmark/benchmark.h>

#include "nlsgs/flows.hpp"
#include "nlsgs/nehari.hpp"
#include "nlsgs/operators.hpp"
#include "nlsgs/sweeps.hpp"

namespace {

using nlsgs::Scheme;

// One projected step of each scheme on comparison case 1.
void BM_Step(benchmark::State& state, Scheme scheme) {
  const auto c = nlsgs::comparison_case(1);
  const auto ops = nlsgs::assemble(c.spec, c.disc);
  const nlsgs::FlowStepper stepper(c.spec, *ops, scheme, 0.1);
  const auto seed = nlsgs::gaussian_seed(c.spec, *ops);
  std::vector<double> out(seed.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(stepper.step(seed.values, out, 1));
  }
}
BENCHMARK_CAPTURE(BM_Step, bf, Scheme::BF);
BENCHMARK_CAPTURE(BM_Step, be, Scheme::BE);
BENCHMARK_CAPTURE(BM_Step, pgf_bf, Scheme::PGF_BF);
BENCHMARK_CAPTURE(BM_Step, ts, Scheme::TS);

// Full solve to tolerance; τ given in thousandths.
void BM_Solve(benchmark::State& state, Scheme scheme) {
  const double tau = static_cast<double>(state.range(0)) / 1000.0;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto rows = nlsgs::compare_schemes(1, {{scheme, {tau}}});
    iters = rows.front().iterations;
  }
  state.counters["iterations"] = static_cast<double>(iters);
}
BENCHMARK_CAPTURE(BM_Solve, bf, Scheme::BF)->Arg(100)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, pgf_bf, Scheme::PGF_BF)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, be, Scheme::BE)->Arg(100)->Unit(benchmark::kMillisecond);

// Assembly and factorization of the FE operator on a radial d = 3 problem.
void BM_AssembleRadialFe(benchmark::State& state) {
  nlsgs::ProblemSpec s;
  s.alpha = 1.0;
  s.omega = 1.0;
  s.dim = 3;
  s.geometry = nlsgs::Geometry::Radial;
  s.radius = 16.0;
  s.potential = nlsgs::InversePower{1.0, 1.5};
  const nlsgs::DiscretizationSpec d{nlsgs::Method::FE, 1.0 / static_cast<double>(state.range(0)),
                                    2, false};
  for (auto _ : state) {
    const auto ops = nlsgs::assemble(s, d);
    benchmark::DoNotOptimize(ops->factor_shifted(1.0));
  }
}
BENCHMARK(BM_AssembleRadialFe)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
