#include <benchmark/benchmark.h>

#include "zolaw/decider.hpp"
#include "zolaw/evaluator.hpp"
#include "zolaw/ham_arith.hpp"
#include "zolaw/parse.hpp"
#include "zolaw/solvers.hpp"

namespace {

using namespace zolaw;

void BM_SampleGnp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        Graph g = sample_gnp(n, 0.5, {42, stream++});
        benchmark::DoNotOptimize(g.edge_count());
    }
}
BENCHMARK(BM_SampleGnp)->Arg(200)->Arg(1000)->Arg(5000);

void BM_IsConnected(benchmark::State& state) {
    Graph g = sample_gnp(static_cast<int>(state.range(0)), 0.01, {7, 0});
    for (auto _ : state) benchmark::DoNotOptimize(is_connected(g));
}
BENCHMARK(BM_IsConnected)->Arg(1000)->Arg(5000);

void BM_Chromatic(benchmark::State& state) {
    Graph g = sample_gnp(static_cast<int>(state.range(0)), 0.5, {11, 3});
    for (auto _ : state) benchmark::DoNotOptimize(chromatic_number(g));
}
BENCHMARK(BM_Chromatic)->Arg(24)->Arg(36);

void BM_Hamiltonian(benchmark::State& state) {
    Graph g = sample_gnp(static_cast<int>(state.range(0)), 0.3, {13, 1});
    for (auto _ : state) benchmark::DoNotOptimize(is_hamiltonian(g));
}
BENCHMARK(BM_Hamiltonian)->Arg(32)->Arg(48);

void BM_EvalConnQuantifier(benchmark::State& state) {
    Graph g = sample_gnp(static_cast<int>(state.range(0)), 0.5, {17, 5});
    FormulaRef f = parse("(Q conn (x y) (adj x y))");
    for (auto _ : state) benchmark::DoNotOptimize(eval(g, f));
}
BENCHMARK(BM_EvalConnQuantifier)->Arg(100)->Arg(300);

void BM_EvalParamSentence(benchmark::State& state) {
    Graph g = sample_gnp(static_cast<int>(state.range(0)), 0.5, {19, 2});
    FormulaRef f = parse("(exists (a) (Q conn (x y) (and (not (= x y)) (adj x a) (adj y a))))");
    for (auto _ : state) benchmark::DoNotOptimize(eval(g, f));
}
BENCHMARK(BM_EvalParamSentence)->Arg(100)->Arg(200);

void BM_Decide(benchmark::State& state) {
    FormulaRef f = parse("(exists (a) (Q chr2 (x y) (and (not (= x y)) "
                         "(or (and (adj x a) (not (adj y a))) (and (adj y a) (not (adj x a)))))))");
    for (auto _ : state) benchmark::DoNotOptimize(decide(f).value);
}
BENCHMARK(BM_Decide);

void BM_PreceqEval(benchmark::State& state) {
    Graph g = sample_gnp(8, 0.5, {23, 9});
    SetDef a{fml::adj(Var("z"), Var("a")), Var("z"), {{"a", 0}}};
    SetDef b{fml::adj(Var("z"), Var("b")), Var("z"), {{"b", 1}}};
    FormulaRef f = build_preceq(a, b);
    Assignment env{{"a", 0}, {"b", 1}};
    for (auto _ : state) benchmark::DoNotOptimize(eval(g, f, env));
}
BENCHMARK(BM_PreceqEval);

void BM_EncodeArith(benchmark::State& state) {
    Testbed t = build_testbed(2);
    EncoderContext ctx{testbed_phi0(t), testbed_phi1(t), 3};
    SORef arith = build_arith({1, 2, 1});
    for (auto _ : state) benchmark::DoNotOptimize(encode_so(arith, ctx));
}
BENCHMARK(BM_EncodeArith);

} // namespace

BENCHMARK_MAIN();
