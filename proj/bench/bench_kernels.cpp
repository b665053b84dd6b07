// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "equichow/presentation.hpp"

using namespace equichow;

namespace {

ExecutionPolicy policy_of(const benchmark::State& state) {
    return state.range(0) ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;
}

// (f, g) -> f^2 g^3 on P(Sym^2) x P(Sym^2), class k1^2 * k2
void BM_Pushforward(benchmark::State& state) {
    auto t = VarTable::make({{"h", 1}, {"g1", 1}, {"g2", 1}, {"k1", 1}, {"k2", 1}});
    Poly g1 = parse_poly("g1", t), g2 = parse_poly("g2", t);
    SpaceDescriptor s({{2, g1, g2, "k1"}, {2, g1, g2, "k2"}});
    auto map = MapDescriptor::multiplication(s, {2, 3});
    Poly cls = parse_poly("k1^2*k2", t);
    for (auto _ : state) benchmark::DoNotOptimize(pushforward(map, cls, policy_of(state)));
}
BENCHMARK(BM_Pushforward)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_VerifyCartesian(benchmark::State& state) {
    auto tP = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"e", 2}});
    auto tP1 = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"x", 1}});
    auto tP0 = VarTable::make({{"l1", 1}, {"l2", 2}});
    auto tD = VarTable::make({{"l1", 1}, {"l2", 2}, {"x", 1}});
    auto P = RingPresentation::parse(tP, {"2*e", "e*(l1*d1+e)"});
    auto P1 = RingPresentation::parse(tP1, {"2*x", "x*(x+l1)"});
    auto P0 = RingPresentation::parse(tP0, {});
    auto D = RingPresentation::parse(tD, {"2*x", "x*(x+l1)"});
    CartesianSquareSpec sq{RingHom(P, P1, {{"e", parse_poly("d1*x", tP1)}}),
                           RingHom(P, P0, {{"d1", Poly(tP0)}, {"e", Poly(tP0)}}),
                           RingHom(P1, D, {{"d1", Poly(tD)}}), RingHom(P0, D, {})};
    for (auto _ : state) benchmark::DoNotOptimize(verify_cartesian(sq, 8, policy_of(state)));
}
BENCHMARK(BM_VerifyCartesian)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
