// Serial reference against the OpenMP kernels: quadrature cells and the
// genfun coefficient table.

#include <benchmark/benchmark.h>

#include "saddle/genfun.hpp"
#include "saddle/quadrature.hpp"

namespace saddle {
namespace {

void BM_Integrate2D(benchmark::State& state) {
    const std::vector<std::string> v{"x", "y"};
    const Expr phi = parse("exp(i*pi/4)*x^2 + x*y + y^2 + x^3 - i*y^3", v);
    const Expr amp = parse("1 + x*y", v);
    Domain dom;
    dom.bounds = {{-0.5, 0.5}, {-0.5, 0.5}};
    QuadOptions o;
    o.policy = state.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(integrate(phi, amp, dom, 80.0, o));
}
BENCHMARK(BM_Integrate2D)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CoefficientTable(benchmark::State& state) {
    const std::vector<std::string> z{"z"};
    const GenFunProblem p{parse("(z + z^2)/2", z), parse("(z^2 + z^3)/2", z), 2.0, 0};
    const ExecPolicy policy = state.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(exact_coefficients(p, 1000, 400, policy));
}
BENCHMARK(BM_CoefficientTable)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace saddle

BENCHMARK_MAIN();
