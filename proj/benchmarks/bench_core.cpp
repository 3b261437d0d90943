#include "skewlab/circle_flows.hpp"
#include "skewlab/exponents.hpp"
#include "skewlab/grigorchuk.hpp"
#include "skewlab/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace skewlab;

namespace {

const BuildResult& quick_build()
{
    static const BuildResult b = [] {
        BuilderConfig c;
        c.relation_check_length = 4;
        return build_sequence(c);
    }();
    return b;
}

void BM_QuaternionCompose(benchmark::State& state)
{
    Rng rng(1);
    UnitQuaternion p = random_small_rotation(rng, 1.0);
    const UnitQuaternion q = random_small_rotation(rng, 1.0);
    for (auto _ : state) {
        p = compose(p, q);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_QuaternionCompose);

void BM_FlowClosedForm(benchmark::State& state)
{
    const FlowSystem flows = FlowSystem::standard();
    const CirclePoint s(flows.spec(2).fixed_point);
    for (auto _ : state)
        benchmark::DoNotOptimize(flows.flow_with_derivative(2, 3.7, s));
}
BENCHMARK(BM_FlowClosedForm);

void BM_FlowOde(benchmark::State& state)
{
    const FlowSystem flows = FlowSystem::standard();
    const CirclePoint s(flows.spec(2).fixed_point + 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(flows.integrate(2, 3.7, s));
}
BENCHMARK(BM_FlowOde);

void BM_PeriodicExponent(benchmark::State& state)
{
    const auto group = make_skew_group(quick_build().sequence, FlowSystem::standard());
    const int letters[] = {1, 2, 3};
    const SkewWord w(group, BaseWord::from_signed(letters));
    PeriodicOptions o;
    o.grid = {4, 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(periodic_exponent(w, static_cast<std::size_t>(state.range(0)), o));
}
BENCHMARK(BM_PeriodicExponent)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RelationCheck(benchmark::State& state)
{
    const auto& gens = quick_build().sequence.generators();
    for (auto _ : state)
        benchmark::DoNotOptimize(no_short_relation_check(gens, static_cast<std::size_t>(state.range(0)), 1e-6));
}
BENCHMARK(BM_RelationCheck)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BallTable(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(BallTable(static_cast<std::size_t>(state.range(0))).size());
}
BENCHMARK(BM_BallTable)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_IsTrivial(benchmark::State& state)
{
    const GrigorchukElement g = GrigorchukElement("abad").power(16);
    for (auto _ : state)
        benchmark::DoNotOptimize(is_trivial(g));
}
BENCHMARK(BM_IsTrivial);

} // namespace

BENCHMARK_MAIN();
